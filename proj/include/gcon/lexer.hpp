#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gcon/error.hpp"

namespace gcon {

enum class TokenKind { identifier, integer, string, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourcePos pos;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;

  bool is(std::string_view p) const {
    return (kind == TokenKind::punct || kind == TokenKind::identifier) && text == p;
  }
  bool is_punct(std::string_view p) const { return kind == TokenKind::punct && text == p; }
};

// Shared tokenizer for the component, property, contract and system
// languages. Handles `//` and `/* */` comments; everything else is left to
// the parsers.
inline std::vector<Token> tokenize(std::string_view src, const std::string& source_name = {}) {
  static constexpr std::string_view kTwo[] = {"::", "->", "==", "!=", "<=", ">=", "..", "&&", "||", "=>"};
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourcePos start{line, col};
      auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) throw ParseError("unterminated comment", start, source_name);
      advance(close + 2 - i);
      continue;
    }
    Token t;
    t.pos = {line, col};
    t.begin = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = TokenKind::identifier;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::integer;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 9) throw ParseError("integer literal too large", t.pos, source_name);
      advance(j - i);
    } else if (c == '"') {
      auto close = src.find('"', i + 1);
      if (close == std::string_view::npos || src.substr(i, close - i).find('\n') != std::string_view::npos)
        throw ParseError("unterminated string", t.pos, source_name);
      t.kind = TokenKind::string;
      t.text = std::string(src.substr(i + 1, close - i - 1));
      advance(close + 1 - i);
    } else {
      t.kind = TokenKind::punct;
      bool two = false;
      for (auto p : kTwo) {
        if (src.substr(i, 2) == p) {
          t.text = std::string(p);
          two = true;
          break;
        }
      }
      if (!two) {
        static constexpr std::string_view kOne = "(){}[],;:=<>+-!?.*#";
        if (kOne.find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", t.pos, source_name);
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    t.end = i;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::end;
  end.pos = {line, col};
  end.begin = end.end = src.size();
  out.push_back(end);
  return out;
}

// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  TokenStream(std::vector<Token> tokens, std::string source_name)
      : tokens_(std::move(tokens)), source_(std::move(source_name)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::end; }

  bool accept(std::string_view p) {
    if (peek().is(p)) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect(std::string_view p) {
    if (!peek().is(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
    return next();
  }

  const Token& expect_identifier(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::identifier)
      fail("expected " + std::string(what) + " but found " + describe(peek()));
    return next();
  }

  std::int32_t expect_integer() {
    bool neg = accept("-");
    if (peek().kind != TokenKind::integer) fail("expected integer but found " + describe(peek()));
    auto v = static_cast<std::int32_t>(std::stol(next().text));
    return neg ? -v : v;
  }

  std::string expect_string() {
    if (peek().kind != TokenKind::string) fail("expected string literal but found " + describe(peek()));
    return next().text;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, peek().pos, source_); }
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(message, t.pos, source_);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::end: return "end of input";
      case TokenKind::string: return "string \"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  const std::string& source() const { return source_; }
  std::size_t position() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> tokens_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace gcon
