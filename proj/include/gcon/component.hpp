#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcon/expr.hpp"
#include "gcon/symbols.hpp"
#include "gcon/types.hpp"

namespace gcon {

struct VarDecl {
  std::string name;
  Domain domain;
  bool timer = false;                 // timers: domain is [0, cap], initial 0
  std::vector<std::int32_t> initial;  // admissible initial values, ascending
  SourcePos pos;

  friend bool operator==(const VarDecl& a, const VarDecl& b) {
    return a.name == b.name && a.domain == b.domain && a.timer == b.timer &&
           a.initial == b.initial;
  }
};

struct Declarations {
  std::vector<EnumType> enums;
  std::vector<VarDecl> vars;

  const VarDecl* find_var(const std::string& name) const {
    for (const auto& v : vars)
      if (v.name == name) return &v;
    return nullptr;
  }
  const EnumType* find_enum(const std::string& name) const {
    for (const auto& e : enums)
      if (e.name == name) return &e;
    return nullptr;
  }
};

enum class SyncDir { send, receive };

struct Sync {
  std::string channel;
  SyncDir dir = SyncDir::send;

  std::string action() const { return channel + (dir == SyncDir::send ? "!" : "?"); }
  friend bool operator==(const Sync&, const Sync&) = default;
};

struct Assignment {
  std::string target;  // resolved variable key
  std::string spelling;
  Expr value;
};

// One `::` option of a location's do-loop: guard, optional rendezvous, and
// effects, applied atomically.
struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  Expr guard;                  // resolved; literal true when absent
  bool explicit_guard = false;
  std::optional<Sync> sync;
  std::vector<Assignment> assignments;   // applied in order
  std::vector<std::string> timer_resets; // keys of timers set back to 0, after assignments
  SourcePos pos;
};

struct Location {
  std::string name;
  Expr invariant;  // nullptr = time may always pass
  SourcePos pos;
};

// A parsed and fully resolved process. Location 0 is the initial location.
struct Component {
  std::string name;
  std::string source;        // file name, for diagnostics
  Declarations globals;      // global declarations visible to this component
  std::vector<VarDecl> locals;
  std::vector<Location> locations;
  std::vector<Edge> edges;

  std::optional<std::size_t> find_location(const std::string& n) const {
    for (std::size_t i = 0; i < locations.size(); ++i)
      if (locations[i].name == n) return i;
    return std::nullopt;
  }

  std::set<std::string> channels() const {
    std::set<std::string> out;
    for (const auto& e : edges)
      if (e.sync) out.insert(e.sync->channel);
    return out;
  }

  std::set<std::string> channels(SyncDir dir) const {
    std::set<std::string> out;
    for (const auto& e : edges)
      if (e.sync && e.sync->dir == dir) out.insert(e.sync->channel);
    return out;
  }

  // Keys of global variables assigned or reset on some edge.
  std::set<std::string> written_globals() const {
    std::set<std::string> out;
    for (const auto& e : edges) {
      for (const auto& a : e.assignments)
        if (a.target.find('.') == std::string::npos) out.insert(a.target);
      for (const auto& r : e.timer_resets)
        if (r.find('.') == std::string::npos) out.insert(r);
    }
    return out;
  }

  // Symbols visible inside the component (and to its contract).
  SymbolTable symbols() const {
    SymbolTable st;
    for (const auto& e : globals.enums) st.add_enum(e);
    for (const auto& v : globals.vars) st.add_global(v.name, v.domain, v.timer);
    st.add_component(name);
    for (const auto& v : locals) st.add_local(name, v.name, v.domain, v.timer);
    for (const auto& l : locations) st.add_location(name, l.name);
    for (const auto& c : channels()) st.add_channel(name, c);
    st.set_scope(name);
    return st;
  }
};

}  // namespace gcon
