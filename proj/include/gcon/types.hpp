#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcon {

enum class BaseType { integer, boolean, enumeration };

struct Type {
  BaseType base = BaseType::integer;
  std::string enum_name;  // only for enumerations

  static Type integer() { return {BaseType::integer, {}}; }
  static Type boolean() { return {BaseType::boolean, {}}; }
  static Type enumeration(std::string name) { return {BaseType::enumeration, std::move(name)}; }

  std::string str() const {
    switch (base) {
      case BaseType::integer: return "int";
      case BaseType::boolean: return "bool";
      case BaseType::enumeration: return enum_name;
    }
    return "?";
  }

  friend bool operator==(const Type&, const Type&) = default;
};

// Named enumeration; each constant carries a numeric alias used only for
// display and export. Values are stored as the constant's index.
struct EnumType {
  std::string name;
  std::vector<std::string> constants;
  std::vector<std::int32_t> aliases;

  int index_of(const std::string& c) const {
    for (std::size_t i = 0; i < constants.size(); ++i)
      if (constants[i] == c) return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const EnumType&, const EnumType&) = default;
};

// Finite value range of a variable. Booleans are 0..1, enums are
// 0..constants-1, integers an explicit closed range.
struct Domain {
  Type type;
  std::int32_t lo = 0;
  std::int32_t hi = 0;

  bool contains(std::int32_t v) const { return lo <= v && v <= hi; }
  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }

  friend bool operator==(const Domain&, const Domain&) = default;
};

}  // namespace gcon
