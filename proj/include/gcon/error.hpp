#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcon {

struct SourcePos {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lexical or syntactic error with a position in the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos, std::string source = {})
      : Error(format(message, pos, source)), pos_(pos), source_(std::move(source)), message_(message) {}

  SourcePos pos() const { return pos_; }
  const std::string& source() const { return source_; }
  const std::string& bare_message() const { return message_; }

 private:
  static std::string format(const std::string& message, SourcePos pos, const std::string& source) {
    std::ostringstream os;
    if (!source.empty()) os << source << ':';
    os << pos.line << ':' << pos.column << ": " << message;
    return os.str();
  }

  SourcePos pos_;
  std::string source_;
  std::string message_;
};

// One or more semantic problems found after parsing (unknown symbols, type
// mismatches, duplicate names). All offenders are kept, not just the first.
class ResolveError : public Error {
 public:
  explicit ResolveError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += '\n';
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

// Ill-formed transition system or model.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Components cannot be wired together (dangling channel, write conflict).
class CompositionError : public Error {
 public:
  using Error::Error;
};

// Runtime evaluation failure: unbound symbol or out-of-domain value.
class EvalError : public Error {
 public:
  using Error::Error;
};

// Exploration exceeded the configured state ceiling.
class StateLimitError : public Error {
 public:
  explicit StateLimitError(std::size_t limit)
      : Error("state limit of " + std::to_string(limit) + " states exceeded"), limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace gcon
