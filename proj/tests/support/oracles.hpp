#pragma once

// Independent reference implementations used as test oracles. None of them
// share code with the library's exploration paths beyond the data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gcon/compose.hpp"
#include "gcon/expr.hpp"
#include "gcon/lts.hpp"
#include "gcon/model.hpp"

namespace oracle {

using gcon::Lts;
using Triple = std::tuple<std::string, std::string, std::string>;

// Random LTS over states s0..s{n-1} and actions drawn from `actions`
// (which may contain "tau"). Every state is listed even if isolated.
inline Lts random_lts(std::mt19937_64& rng, const std::string& prefix, int max_states,
                      const std::vector<std::string>& actions, int max_edges, double tau_share = 0.0) {
  std::uniform_int_distribution<int> n_states(1, max_states);
  const int n = n_states(rng);
  std::uniform_int_distribution<int> pick_state(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_action(0, actions.size() - 1);
  std::uniform_int_distribution<int> n_edges(0, max_edges);
  std::bernoulli_distribution tau(tau_share);
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back(prefix + std::to_string(i));
  std::vector<Triple> edges;
  const int m = n_edges(rng);
  for (int i = 0; i < m; ++i) {
    auto a = tau_share > 0 && tau(rng) ? std::string("tau") : actions[pick_action(rng)];
    edges.emplace_back(states[static_cast<std::size_t>(pick_state(rng))], a,
                       states[static_cast<std::size_t>(pick_state(rng))]);
  }
  std::vector<std::string> extra(states.begin() + 1, states.end());
  std::vector<std::string> alphabet;
  for (const auto& a : actions)
    if (a != "tau") alphabet.push_back(a);
  return gcon::make_lts(states.front(), edges, extra, alphabet);
}

inline std::set<std::string> alphabet_names(const Lts& l) {
  std::set<std::string> out;
  for (const auto& a : l.alphabet()) out.insert(a.name);
  return out;
}

inline bool has(const Lts& l, const std::string& s, const std::string& a, const std::string& t) {
  return l.named_transitions().count({s, a, t}) > 0;
}

// Transitions of the composition by direct application of the three rules
// over every (p, q, action, p', q') combination, then restricted to the pairs
// reachable from the initial pair.
inline std::set<Triple> brute_force_compose(const Lts& p, const Lts& q, const std::set<std::string>& sync) {
  auto pt = p.named_transitions();
  auto qt = q.named_transitions();
  std::set<std::string> actions = alphabet_names(p);
  for (const auto& a : alphabet_names(q)) actions.insert(a);
  auto name = [](const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; };
  std::set<Triple> all;
  for (const auto& s1 : p.states())
    for (const auto& s2 : q.states())
      for (const auto& a : actions)
        for (const auto& t1 : p.states())
          for (const auto& t2 : q.states()) {
            bool in_sync = sync.count(a) > 0;
            bool r1 = !in_sync && pt.count({s1, a, t1}) && s2 == t2;
            bool r2 = !in_sync && qt.count({s2, a, t2}) && s1 == t1;
            bool r3 = in_sync && pt.count({s1, a, t1}) && qt.count({s2, a, t2});
            if (r1 || r2 || r3) all.emplace(name(s1, s2), a, name(t1, t2));
          }
  std::set<std::string> seen{name(p.state_name(p.initial()), q.state_name(q.initial()))};
  std::vector<std::string> stack(seen.begin(), seen.end());
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (const auto& [a, b, c] : all)
      if (a == s && seen.insert(c).second) stack.push_back(c);
  }
  std::set<Triple> out;
  for (const auto& tr : all)
    if (seen.count(std::get<0>(tr))) out.insert(tr);
  return out;
}

// How many composition rules license (p,q) -a-> (p',q').
inline int justifications(const Lts& p, const Lts& q, const std::set<std::string>& sync,
                          const std::string& s1, const std::string& s2, const std::string& a,
                          const std::string& t1, const std::string& t2) {
  bool in_sync = sync.count(a) > 0;
  int n = 0;
  if (!in_sync && has(p, s1, a, t1) && s2 == t2) ++n;
  if (!in_sync && has(q, s2, a, t2) && s1 == t1) ++n;
  if (in_sync && has(p, s1, a, t1) && has(q, s2, a, t2)) ++n;
  return n;
}

// Recursive depth-first reachability by state name.
inline std::set<std::string> dfs_reachable(const Lts& l) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [s, a, t] : l.named_transitions()) succ[s].push_back(t);
  std::set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& s) {
    if (!seen.insert(s).second) return;
    for (const auto& t : succ[s]) visit(t);
  };
  visit(l.state_name(l.initial()));
  return seen;
}

// Reflexive-transitive closure of the tau relation by boolean matrix
// iteration until nothing changes.
inline std::set<std::string> tau_fixpoint(const Lts& l, const std::string& from) {
  const auto n = l.state_count();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (const auto& t : l.transitions())
    if (l.action(t.action).internal()) r[t.source][t.target] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (r[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (r[k][j] && !r[i][j]) r[i][j] = 1, changed = true;
  }
  std::set<std::string> out;
  auto s = *l.find_state(from);
  for (std::size_t j = 0; j < n; ++j)
    if (r[s][j]) out.insert(l.state_name(static_cast<gcon::StateId>(j)));
  return out;
}

// Length of the shortest path from the initial state to any state where
// `bad` holds, by Bellman-Ford style relaxation; -1 if none is reachable.
inline long shortest_violation(const Lts& l, const std::function<bool(gcon::StateId)>& bad) {
  const long inf = static_cast<long>(l.state_count()) + 1;
  std::vector<long> dist(l.state_count(), inf);
  dist[l.initial()] = 0;
  for (std::size_t round = 0; round < l.state_count(); ++round) {
    bool changed = false;
    for (const auto& t : l.transitions())
      if (dist[t.source] + 1 < dist[t.target]) dist[t.target] = dist[t.source] + 1, changed = true;
    if (!changed) break;
  }
  long best = inf;
  for (gcon::StateId s = 0; s < l.state_count(); ++s)
    if (bad(s)) best = std::min(best, dist[s]);
  return best == inf ? -1 : best;
}

// Reference interpreter of the component language: walks the same Program
// with the tree evaluator and std containers, and returns the canonical text
// of every reachable state (locations, then variables by key). Used to cross
// check state counts and valuations of the bytecode explorer.
class Interpreter {
 public:
  explicit Interpreter(const gcon::Program& p) : prog_(p) {}

  struct State {
    std::vector<std::size_t> locs;
    gcon::Valuation val;
  };

  std::string canonical(const State& s) const {
    std::ostringstream os;
    for (std::size_t c = 0; c < s.locs.size(); ++c)
      os << prog_.components[c].name << "@" << prog_.components[c].locations[s.locs[c]].name << " ";
    for (const auto& [k, v] : s.val.values) os << k << "=" << v << " ";
    return os.str();
  }

  std::vector<State> initial() const {
    std::vector<std::pair<std::string, const gcon::VarDecl*>> vars;
    for (const auto& v : prog_.globals.vars) vars.emplace_back(v.name, &v);
    for (const auto& c : prog_.components)
      for (const auto& v : c.locals) vars.emplace_back(c.name + "." + v.name, &v);
    std::vector<State> out{State{std::vector<std::size_t>(prog_.components.size(), 0), {}}};
    for (const auto& [key, decl] : vars) {
      std::vector<State> next;
      for (const auto& s : out)
        for (auto x : decl->initial) {
          auto t = s;
          t.val.values[key] = x;
          next.push_back(t);
        }
      out = std::move(next);
    }
    for (auto& s : out) sync_locations(s);
    return out;
  }

  std::vector<std::pair<std::string, State>> successors(const State& s) const {
    std::vector<std::pair<std::string, State>> out;
    for (std::size_t c = 0; c < prog_.components.size(); ++c) {
      const auto& comp = prog_.components[c];
      for (const auto& e : comp.edges) {
        if (e.source != s.locs[c] || !gcon::eval_expr(e.guard, s.val)) continue;
        if (e.sync && prog_.mode == gcon::SyncMode::rendezvous) {
          if (e.sync->dir != gcon::SyncDir::send) continue;
          for (std::size_t d = 0; d < prog_.components.size(); ++d) {
            if (d == c) continue;
            for (const auto& r : prog_.components[d].edges) {
              if (r.source != s.locs[d] || !r.sync || r.sync->dir != gcon::SyncDir::receive ||
                  r.sync->channel != e.sync->channel || !gcon::eval_expr(r.guard, s.val))
                continue;
              auto t = s;
              fire(t, c, e);
              fire(t, d, r);
              out.emplace_back(e.sync->channel, t);
            }
          }
          continue;
        }
        auto t = s;
        fire(t, c, e);
        out.emplace_back(e.sync ? e.sync->action() : "tau", t);
      }
    }
    auto t = s;
    for (const auto& [key, cap] : timers()) t.val.values[key] = std::min(t.val.values[key] + 1, cap);
    bool ok = true;
    for (std::size_t c = 0; c < prog_.components.size(); ++c) {
      const auto& inv = prog_.components[c].locations[t.locs[c]].invariant;
      if (inv && !gcon::eval_expr(inv, t.val)) ok = false;
    }
    if (ok) out.emplace_back("tick", t);
    return out;
  }

  std::set<std::string> reachable() const {
    std::set<std::string> seen;
    std::vector<State> stack;
    for (const auto& s : initial())
      if (seen.insert(canonical(s)).second) stack.push_back(s);
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      for (auto& [a, t] : successors(s))
        if (seen.insert(canonical(t)).second) stack.push_back(std::move(t));
    }
    return seen;
  }

  // Canonical text of a StateSpace state in the interpreter's format.
  static std::string canonical(const gcon::StateSpace& m, gcon::StateId s) {
    auto v = m.valuation(s);
    std::ostringstream os;
    for (const auto& c : m.layout().components) os << c << "@" << v.locations.at(c) << " ";
    for (const auto& [k, x] : v.values) os << k << "=" << x << " ";
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::int32_t>> timers() const {
    std::vector<std::pair<std::string, std::int32_t>> out;
    for (const auto& v : prog_.globals.vars)
      if (v.timer) out.emplace_back(v.name, v.domain.hi);
    for (const auto& c : prog_.components)
      for (const auto& v : c.locals)
        if (v.timer) out.emplace_back(c.name + "." + v.name, v.domain.hi);
    return out;
  }

  const gcon::VarDecl* decl(const std::string& key) const {
    for (const auto& v : prog_.globals.vars)
      if (v.name == key) return &v;
    for (const auto& c : prog_.components)
      for (const auto& v : c.locals)
        if (c.name + "." + v.name == key) return &v;
    return nullptr;
  }

  void fire(State& s, std::size_t c, const gcon::Edge& e) const {
    for (const auto& a : e.assignments) {
      auto x = gcon::eval_int(a.value, s.val);
      const auto* d = decl(a.target);
      if (x < d->domain.lo || x > d->domain.hi) throw gcon::ModelError("interpreter: out of domain");
      s.val.values[a.target] = x;
    }
    for (const auto& r : e.timer_resets) s.val.values[r] = 0;
    s.locs[c] = e.target;
    sync_locations(s);
  }

  void sync_locations(State& s) const {
    for (std::size_t c = 0; c < prog_.components.size(); ++c)
      s.val.locations[prog_.components[c].name] = prog_.components[c].locations[s.locs[c]].name;
  }

  const gcon::Program& prog_;
};

}  // namespace oracle
