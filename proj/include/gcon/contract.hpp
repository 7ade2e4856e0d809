#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gcon/component.hpp"
#include "gcon/dsl_parser.hpp"
#include "gcon/error.hpp"
#include "gcon/lexer.hpp"
#include "gcon/prop_lang.hpp"

namespace gcon {

// Facet names are case-insensitive; they are stored lowercased.
class FacetId {
 public:
  FacetId() = default;
  explicit FacetId(std::string_view name) {
    if (name.empty()) throw Error("empty facet name");
    for (char c : name) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') throw Error("invalid facet name '" + std::string(name) + "'");
      name_ += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }

  const std::string& name() const { return name_; }
  friend auto operator<=>(const FacetId&, const FacetId&) = default;

 private:
  std::string name_;
};

inline constexpr int kUnknownFacetPriority = 100;

// Priorities used when a contract leaves them out: data, security, time,
// functionality, in that order; anything else goes last.
inline int default_priority(const FacetId& f) {
  static const std::map<std::string, int> kDefaults = {
      {"data", 1}, {"security", 2}, {"time", 3}, {"functionality", 4}};
  auto it = kDefaults.find(f.name());
  return it == kDefaults.end() ? kUnknownFacetPriority : it->second;
}

enum class Role { assume, guarantee };

inline const char* to_string(Role r) { return r == Role::assume ? "assume" : "guarantee"; }

struct ContractProperty {
  Property property;
  std::optional<int> rank;  // ordering within the layer; unranked keep declaration order
};

struct FacetSection {
  FacetId facet;
  std::optional<int> priority;
  std::vector<ContractProperty> assumes;
  std::vector<ContractProperty> guarantees;

  std::vector<ContractProperty>& list(Role r) { return r == Role::assume ? assumes : guarantees; }
  const std::vector<ContractProperty>& list(Role r) const { return r == Role::assume ? assumes : guarantees; }
};

struct GeneralizedContract {
  std::string component;
  std::vector<FacetSection> facets;  // declaration order

  const FacetSection* find(const FacetId& f) const {
    for (const auto& s : facets)
      if (s.facet == f) return &s;
    return nullptr;
  }
  FacetSection* find(const FacetId& f) {
    for (auto& s : facets)
      if (s.facet == f) return &s;
    return nullptr;
  }

  std::size_t property_count() const {
    std::size_t n = 0;
    for (const auto& s : facets) n += s.assumes.size() + s.guarantees.size();
    return n;
  }

  bool has_property(const std::string& name) const {
    for (const auto& s : facets)
      for (auto r : {Role::assume, Role::guarantee})
        for (const auto& p : s.list(r))
          if (p.property.name == name) return true;
    return false;
  }
};

inline bool structurally_equal(const GeneralizedContract& a, const GeneralizedContract& b) {
  if (a.component != b.component || a.facets.size() != b.facets.size()) return false;
  for (std::size_t i = 0; i < a.facets.size(); ++i) {
    const auto &x = a.facets[i], &y = b.facets[i];
    if (!(x.facet == y.facet) || x.priority != y.priority) return false;
    for (auto r : {Role::assume, Role::guarantee}) {
      const auto &lx = x.list(r), &ly = y.list(r);
      if (lx.size() != ly.size()) return false;
      for (std::size_t k = 0; k < lx.size(); ++k)
        if (lx[k].rank != ly[k].rank || !structurally_equal(lx[k].property, ly[k].property)) return false;
    }
  }
  return true;
}

// Facets in verification order: ascending priority, ties by name.
inline std::vector<FacetId> layer_order(const GeneralizedContract& k) {
  std::vector<std::pair<int, FacetId>> keyed;
  for (const auto& s : k.facets) {
    if (!s.priority) throw ModelError("facet '" + s.facet.name() + "' of contract '" + k.component + "' has no priority");
    keyed.emplace_back(*s.priority, s.facet);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<FacetId> out;
  for (auto& [p, f] : keyed) out.push_back(f);
  return out;
}

// Properties of one facet and role in checking order: ranked ones ascending
// by rank, then the unranked ones in declaration order.
inline std::vector<Property> ordered_properties(const FacetSection& s, Role r) {
  std::vector<const ContractProperty*> ps;
  for (const auto& p : s.list(r)) ps.push_back(&p);
  std::stable_sort(ps.begin(), ps.end(), [](const ContractProperty* a, const ContractProperty* b) {
    auto ka = a->rank.value_or(std::numeric_limits<int>::max());
    auto kb = b->rank.value_or(std::numeric_limits<int>::max());
    return ka < kb;
  });
  std::vector<Property> out;
  for (const auto* p : ps) out.push_back(p->property);
  return out;
}

namespace detail {

inline void parse_property_block(TokenStream& ts, std::vector<ContractProperty>& into) {
  ts.expect("{");
  while (!ts.peek().is_punct("}")) {
    ContractProperty cp;
    if (ts.accept("rank")) cp.rank = ts.expect_integer();
    cp.property = parse_property_statement(ts);
    into.push_back(std::move(cp));
  }
  ts.expect("}");
}

}  // namespace detail

// Parses
//   contract <component> {
//     facet <name> [priority <n>] {
//       [assume { [rank <n>] Property ...; ... }]
//       [guarantee { ... }]
//     }
//   }
// Properties are left unresolved; see normalize(). Facets without an
// explicit priority get default_priority().
inline GeneralizedContract parse_contract(std::string_view text, const std::string& source = {}) {
  TokenStream ts(tokenize(text, source), source);
  GeneralizedContract k;
  ts.expect("contract");
  k.component = ts.expect_identifier("component name").text;
  ts.expect("{");
  while (!ts.peek().is_punct("}")) {
    ts.expect("facet");
    const auto& n = ts.expect_identifier("facet name");
    FacetSection s;
    s.facet = FacetId(n.text);
    if (k.find(s.facet)) ts.fail_at(n, "duplicate facet '" + n.text + "'");
    if (ts.accept("priority")) {
      auto p = ts.expect_integer();
      if (p < 1) ts.fail("facet priority must be a positive integer");
      s.priority = p;
    } else {
      s.priority = default_priority(s.facet);
    }
    ts.expect("{");
    while (!ts.peek().is_punct("}")) {
      if (ts.accept("assume")) {
        detail::parse_property_block(ts, s.assumes);
      } else if (ts.accept("guarantee")) {
        detail::parse_property_block(ts, s.guarantees);
      } else {
        ts.fail("expected 'assume' or 'guarantee' but found " + TokenStream::describe(ts.peek()));
      }
    }
    ts.expect("}");
    k.facets.push_back(std::move(s));
  }
  ts.expect("}");
  if (!ts.at_end()) ts.fail("unexpected " + TokenStream::describe(ts.peek()) + " after contract");
  return k;
}

inline GeneralizedContract parse_contract_file(const std::filesystem::path& path) {
  return parse_contract(read_text_file(path), path.filename().string());
}

// A behaviour paired with a contract whose properties are all resolved
// against the behaviour's symbols.
struct WellStructuredComponent {
  Component behaviour;
  GeneralizedContract contract;
};

// Resolves every property of k against c. All problems (unresolved symbols,
// duplicate names, missing priorities, name mismatch) are reported together.
inline WellStructuredComponent normalize(const Component& c, const GeneralizedContract& k) {
  std::vector<std::string> errors;
  const auto& src = c.source;
  if (!k.component.empty() && k.component != c.name)
    errors.push_back("contract is for '" + k.component + "' but the behaviour is '" + c.name + "'");
  auto st = c.symbols();
  GeneralizedContract out = k;
  out.component = c.name;
  std::set<std::string> names;
  for (auto& s : out.facets) {
    if (!s.priority) errors.push_back("facet '" + s.facet.name() + "' has no priority");
    for (auto r : {Role::assume, Role::guarantee}) {
      for (auto& cp : s.list(r)) {
        auto& p = cp.property;
        if (p.name.empty()) errors.push_back("unnamed property in facet '" + s.facet.name() + "'");
        else if (!names.insert(p.name).second) errors.push_back("duplicate property name '" + p.name + "'");
        if (auto resolved = resolve_property(p, st, errors, src)) p = *resolved;
      }
    }
  }
  if (!errors.empty()) throw ResolveError(errors);
  return {c, out};
}

struct FacetAddition {
  FacetId facet;
  Property property;  // resolved or not; resolved again against the behaviour
  Role role = Role::guarantee;
  std::optional<int> priority;  // required when the facet is new
};

struct AdjustedComponent {
  WellStructuredComponent component;
  bool needs_recheck = false;  // set whenever anything changed
};

// Drops the named properties, then appends the additions (a new facet is
// created at the end when needed).
inline AdjustedComponent adjust_facets(const WellStructuredComponent& w, const std::vector<FacetAddition>& add,
                                       const std::vector<std::string>& drop) {
  std::vector<std::string> errors;
  auto k = w.contract;
  for (const auto& name : drop) {
    bool found = false;
    for (auto& s : k.facets)
      for (auto r : {Role::assume, Role::guarantee}) {
        auto& l = s.list(r);
        auto it = std::find_if(l.begin(), l.end(), [&](const ContractProperty& p) { return p.property.name == name; });
        if (it != l.end()) {
          l.erase(it);
          found = true;
        }
      }
    if (!found) errors.push_back("cannot drop unknown property '" + name + "'");
  }
  auto st = w.behaviour.symbols();
  for (const auto& a : add) {
    if (k.has_property(a.property.name)) {
      errors.push_back("duplicate property name '" + a.property.name + "'");
      continue;
    }
    auto resolved = resolve_property(a.property, st, errors, w.behaviour.source);
    if (!resolved) continue;
    auto* s = k.find(a.facet);
    if (!s) {
      if (!a.priority) {
        errors.push_back("new facet '" + a.facet.name() + "' needs a priority");
        continue;
      }
      k.facets.push_back(FacetSection{a.facet, a.priority, {}, {}});
      s = &k.facets.back();
    } else if (a.priority && a.priority != s->priority) {
      errors.push_back("facet '" + a.facet.name() + "' already has priority " + std::to_string(*s->priority));
      continue;
    }
    s->list(a.role).push_back({*resolved, std::nullopt});
  }
  if (!errors.empty()) throw ResolveError(errors);
  return {{w.behaviour, k}, !add.empty() || !drop.empty()};
}

}  // namespace gcon
