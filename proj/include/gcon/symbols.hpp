#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcon/error.hpp"
#include "gcon/types.hpp"

namespace gcon {

struct VarInfo {
  std::string key;      // "x" for globals, "Comp.x" for component locals
  std::string owner;    // component name, empty for globals
  std::string name;     // declared name
  Domain domain;
  bool timer = false;
};

// Names visible to properties and guards: enumerations and their constants,
// global variables, and per-component locals and locations. Lookups of bare
// names prefer the scope component's locals, then globals, then constants.
class SymbolTable {
 public:
  SymbolTable() {
    constants_["false"] = {Type::boolean(), 0};
    constants_["true"] = {Type::boolean(), 1};
  }

  void add_enum(const EnumType& e) {
    if (enums_.count(e.name) || e.name == "bool" || e.name == "int")
      throw ResolveError({"duplicate type name '" + e.name + "'"});
    for (std::size_t i = 0; i < e.constants.size(); ++i) {
      const auto& c = e.constants[i];
      if (constants_.count(c)) throw ResolveError({"duplicate enumeration constant '" + c + "'"});
      constants_[c] = {Type::enumeration(e.name), static_cast<std::int32_t>(i)};
    }
    enums_[e.name] = e;
  }

  void add_global(const std::string& name, const Domain& d, bool timer = false) {
    if (globals_.count(name)) throw ResolveError({"duplicate global '" + name + "'"});
    globals_[name] = VarInfo{name, {}, name, d, timer};
  }

  void add_component(const std::string& comp) { components_[comp]; }

  void add_local(const std::string& comp, const std::string& name, const Domain& d, bool timer = false) {
    auto& c = components_[comp];
    if (c.locals.count(name)) throw ResolveError({"duplicate local '" + name + "' in " + comp});
    c.locals[name] = VarInfo{comp + "." + name, comp, name, d, timer};
  }

  void add_location(const std::string& comp, const std::string& loc) { components_[comp].locations.insert(loc); }
  void add_channel(const std::string& comp, const std::string& chan) { components_[comp].channels.insert(chan); }

  void set_scope(std::optional<std::string> comp) { scope_ = std::move(comp); }
  const std::optional<std::string>& scope() const { return scope_; }

  std::optional<VarInfo> lookup_var(const std::string& name) const {
    if (scope_) {
      auto c = components_.find(*scope_);
      if (c != components_.end()) {
        auto it = c->second.locals.find(name);
        if (it != c->second.locals.end()) return it->second;
      }
    }
    auto g = globals_.find(name);
    if (g != globals_.end()) return g->second;
    return std::nullopt;
  }

  std::optional<VarInfo> lookup_local(const std::string& comp, const std::string& name) const {
    auto c = components_.find(comp);
    if (c == components_.end()) return std::nullopt;
    auto it = c->second.locals.find(name);
    if (it == c->second.locals.end()) return std::nullopt;
    return it->second;
  }

  struct Constant {
    Type type;
    std::int32_t value = 0;
  };
  std::optional<Constant> lookup_constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) return std::nullopt;
    return it->second;
  }

  bool has_component(const std::string& comp) const { return components_.count(comp) > 0; }
  bool has_location(const std::string& comp, const std::string& loc) const {
    auto c = components_.find(comp);
    return c != components_.end() && c->second.locations.count(loc) > 0;
  }
  bool has_channel(const std::string& comp, const std::string& chan) const {
    auto c = components_.find(comp);
    return c != components_.end() && c->second.channels.count(chan) > 0;
  }

  const EnumType* enum_type(const std::string& name) const {
    auto it = enums_.find(name);
    return it == enums_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, EnumType>& enums() const { return enums_; }
  const std::map<std::string, VarInfo>& globals() const { return globals_; }

 private:
  struct ComponentSymbols {
    std::map<std::string, VarInfo> locals;
    std::set<std::string> locations;
    std::set<std::string> channels;
  };

  std::map<std::string, EnumType> enums_;
  std::map<std::string, Constant> constants_;
  std::map<std::string, VarInfo> globals_;
  std::map<std::string, ComponentSymbols> components_;
  std::optional<std::string> scope_;
};

}  // namespace gcon
