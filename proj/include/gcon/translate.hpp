#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "gcon/component.hpp"

namespace gcon {

namespace detail {

inline std::string initial_text(const VarDecl& v, const std::vector<EnumType>& enums) {
  auto one = [&](std::int32_t x) -> std::string {
    switch (v.domain.type.base) {
      case BaseType::boolean: return x ? "true" : "false";
      case BaseType::enumeration:
        for (const auto& e : enums)
          if (e.name == v.domain.type.enum_name) return e.constants.at(static_cast<std::size_t>(x));
        return std::to_string(x);
      default: return std::to_string(x);
    }
  };
  if (v.initial.size() == 1) return one(v.initial.front());
  std::string out = "{";
  for (std::size_t i = 0; i < v.initial.size(); ++i) out += (i ? ", " : "") + one(v.initial[i]);
  return out + "}";
}

inline void declare(std::ostringstream& os, const VarDecl& v, const std::vector<EnumType>& enums,
                    const std::string& indent) {
  os << indent;
  if (v.timer) {
    os << "clock " << v.name << ";  // discrete, saturates at " << v.domain.hi << "\n";
    return;
  }
  switch (v.domain.type.base) {
    case BaseType::boolean: os << "bool "; break;
    case BaseType::enumeration: {
      const EnumType* e = nullptr;
      for (const auto& x : enums)
        if (x.name == v.domain.type.enum_name) e = &x;
      auto lo = e ? *std::min_element(e->aliases.begin(), e->aliases.end()) : v.domain.lo;
      auto hi = e ? *std::max_element(e->aliases.begin(), e->aliases.end()) : v.domain.hi;
      os << "int[" << lo << "," << hi << "] ";
      break;
    }
    default: os << "int[" << v.domain.lo << "," << v.domain.hi << "] "; break;
  }
  os << v.name;
  auto init = initial_text(v, enums);
  if (v.initial.size() == 1) os << " = " << init << ";\n";
  else os << ";  // initially one of " << init << "\n";
}

inline bool is_false(const Expr& e) {
  return e && e->kind == ExprKind::enum_lit && e->type.base == BaseType::boolean && e->value == 0;
}

}  // namespace detail

// Automaton-style text of one component: global declarations, then a
// process block listing locations (with invariants), the initial location
// and one transition per option with its guard, sync and assignments, in
// that order. TIMER_X declarations become clocks.
inline std::string export_uppaal_like(const Component& c) {
  std::ostringstream os;
  const auto& enums = c.globals.enums;
  os << "// declarations\n";
  for (const auto& e : enums) {
    os << "// " << e.name << "\n";
    for (std::size_t i = 0; i < e.constants.size(); ++i)
      os << "const int " << e.constants[i] << " = " << e.aliases[i] << ";\n";
  }
  for (const auto& v : c.globals.vars) detail::declare(os, v, enums, "");
  if (!c.channels().empty()) {
    os << "chan";
    bool first = true;
    for (const auto& ch : c.channels()) {
      os << (first ? " " : ", ") << ch;
      first = false;
    }
    os << ";\n";
  }
  os << "\nprocess " << c.name << "() {\n";
  for (const auto& v : c.locals) detail::declare(os, v, enums, "  ");
  os << "  state\n";
  std::vector<std::string> urgent;
  for (std::size_t i = 0; i < c.locations.size(); ++i) {
    const auto& l = c.locations[i];
    os << "    " << l.name;
    if (detail::is_false(l.invariant)) urgent.push_back(l.name);
    else if (l.invariant) os << " { " << render(l.invariant) << " }";
    os << (i + 1 < c.locations.size() ? ",\n" : ";\n");
  }
  if (!urgent.empty()) {
    os << "  urgent";
    for (std::size_t i = 0; i < urgent.size(); ++i) os << (i ? ", " : " ") << urgent[i];
    os << ";\n";
  }
  os << "  init " << c.locations.front().name << ";\n";
  if (!c.edges.empty()) os << "  trans\n";
  std::size_t n = 0;
  for (std::size_t li = 0; li < c.locations.size(); ++li)
    for (const auto& e : c.edges) {
      if (e.source != li) continue;
      ++n;
      os << "    " << c.locations[e.source].name << " -> " << c.locations[e.target].name << " {";
      if (e.explicit_guard) os << " guard " << render(e.guard) << ";";
      if (e.sync) os << " sync " << e.sync->action() << ";";
      if (!e.assignments.empty() || !e.timer_resets.empty()) {
        os << " assign";
        bool first = true;
        for (const auto& a : e.assignments) {
          os << (first ? " " : ", ") << a.spelling << " = " << render(a.value);
          first = false;
        }
        for (const auto& r : e.timer_resets) {
          auto name = r.substr(r.find('.') == std::string::npos ? 0 : r.find('.') + 1);
          os << (first ? " " : ", ") << name << " = 0";
          first = false;
        }
        os << ";";
      }
      os << " }" << (n < c.edges.size() ? ",\n" : ";\n");
    }
  os << "}\n\nsystem " << c.name << ";\n";
  return os.str();
}

}  // namespace gcon
