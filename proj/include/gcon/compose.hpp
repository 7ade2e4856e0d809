#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gcon/lts.hpp"

namespace gcon {

// Visible action names on which two systems synchronize.
class SyncSet {
 public:
  SyncSet() = default;
  SyncSet(std::initializer_list<std::string> names) : SyncSet(std::set<std::string>(names)) {}
  explicit SyncSet(std::set<std::string> names) : names_(std::move(names)) {
    if (names_.count(std::string(kTauName)))
      throw ModelError("the internal action cannot be synchronized on");
    for (const auto& n : names_)
      if (n.empty()) throw ModelError("empty action name in sync set");
  }

  bool contains(std::string_view name) const { return names_.count(std::string(name)) > 0; }
  const std::set<std::string>& names() const { return names_; }
  bool empty() const { return names_.empty(); }

 private:
  std::set<std::string> names_;
};

// Composition result plus, for every composed state, the pair of component
// states it stands for.
struct ComposedLts {
  Lts lts;
  std::vector<std::pair<StateId, StateId>> origin;
};

namespace detail {

inline std::string pair_name(const std::string& p, const std::string& q) {
  // nested tuples on the left flatten: ((a,b),c) is written (a,b,c)
  if (p.size() >= 2 && p.front() == '(' && p.back() == ')')
    return p.substr(0, p.size() - 1) + "," + q + ")";
  return "(" + p + "," + q + ")";
}

struct MergedAlphabet {
  std::vector<ActionLabel> labels;
  std::vector<ActionId> from_p, from_q;
  std::vector<char> synced;  // per merged id
};

inline MergedAlphabet merge_alphabets(const Lts& p, const Lts& q, const SyncSet& sync) {
  MergedAlphabet m;
  std::map<std::string, ActionId> ids;
  auto add = [&](const ActionLabel& a) {
    auto [it, fresh] = ids.emplace(a.name, static_cast<ActionId>(m.labels.size()));
    if (fresh) {
      m.labels.push_back(a);
      m.synced.push_back(!a.internal() && sync.contains(a.name));
    } else if (m.labels[it->second].kind != a.kind) {
      throw ModelError("action '" + a.name + "' is internal in one system and visible in the other");
    }
    return it->second;
  };
  for (const auto& a : p.alphabet()) m.from_p.push_back(add(a));
  for (const auto& a : q.alphabet()) m.from_q.push_back(add(a));
  return m;
}

}  // namespace detail

// P |[sync]| Q restricted to the part reachable from (p_init, q_init).
//
// (p,q) -a-> (p',q') iff
//   (1) p -a-> p', q' = q, a not in sync, or
//   (2) p' = p, q -a-> q', a not in sync, or
//   (3) p -a-> p', q -a-> q', a in sync.
//
// States are numbered in breadth-first discovery order; successors of a state
// are discovered by ascending (action name, p', q').
inline ComposedLts parallel_compose_with_origin(const Lts& p, const Lts& q, const SyncSet& sync) {
  auto m = detail::merge_alphabets(p, q, sync);

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> origin;
  std::deque<StateId> queue;
  auto intern = [&](std::pair<StateId, StateId> pq) {
    auto [it, fresh] = index.emplace(pq, static_cast<StateId>(origin.size()));
    if (fresh) {
      origin.push_back(pq);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern({p.initial(), q.initial()});

  struct Move {
    std::string_view action;
    ActionId id;
    std::pair<StateId, StateId> target;
  };
  std::vector<Transition> transitions;
  std::vector<Move> moves;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    auto [ps, qs] = origin[s];
    moves.clear();
    for (const auto& t : p.outgoing(ps)) {
      ActionId a = m.from_p[t.action];
      if (!m.synced[a]) moves.push_back({m.labels[a].name, a, {t.target, qs}});  // rule (1)
    }
    for (const auto& t : q.outgoing(qs)) {
      ActionId a = m.from_q[t.action];
      if (!m.synced[a]) moves.push_back({m.labels[a].name, a, {ps, t.target}});  // rule (2)
    }
    for (const auto& tp : p.outgoing(ps)) {  // rule (3)
      ActionId a = m.from_p[tp.action];
      if (!m.synced[a]) continue;
      for (const auto& tq : q.outgoing(qs))
        if (m.from_q[tq.action] == a) moves.push_back({m.labels[a].name, a, {tp.target, tq.target}});
    }
    std::sort(moves.begin(), moves.end(), [](const Move& x, const Move& y) {
      return std::tie(x.action, x.target) < std::tie(y.action, y.target);
    });
    for (const auto& mv : moves) transitions.push_back({s, mv.id, intern(mv.target)});
  }

  std::vector<std::string> names;
  names.reserve(origin.size());
  for (auto [ps, qs] : origin) names.push_back(detail::pair_name(p.state_name(ps), q.state_name(qs)));
  return {Lts(std::move(names), std::move(m.labels), std::move(transitions), 0), std::move(origin)};
}

inline Lts parallel_compose(const Lts& p, const Lts& q, const SyncSet& sync) {
  return parallel_compose_with_origin(p, q, sync).lts;
}

// The unrestricted product over all of states(P) x states(Q). Intended for
// cross-checking the reachable construction on small inputs.
inline ComposedLts parallel_compose_full(const Lts& p, const Lts& q, const SyncSet& sync) {
  auto m = detail::merge_alphabets(p, q, sync);
  const auto nq = static_cast<StateId>(q.state_count());
  auto id = [&](StateId a, StateId b) { return a * nq + b; };
  std::vector<std::pair<StateId, StateId>> origin;
  std::vector<std::string> names;
  for (StateId a = 0; a < p.state_count(); ++a)
    for (StateId b = 0; b < nq; ++b) {
      origin.emplace_back(a, b);
      names.push_back(detail::pair_name(p.state_name(a), q.state_name(b)));
    }
  std::vector<Transition> ts;
  for (const auto& [a, b] : origin) {
    for (const auto& t : p.outgoing(a))
      if (!m.synced[m.from_p[t.action]]) ts.push_back({id(a, b), m.from_p[t.action], id(t.target, b)});
    for (const auto& t : q.outgoing(b))
      if (!m.synced[m.from_q[t.action]]) ts.push_back({id(a, b), m.from_q[t.action], id(a, t.target)});
    for (const auto& tp : p.outgoing(a))
      for (const auto& tq : q.outgoing(b))
        if (m.from_p[tp.action] == m.from_q[tq.action] && m.synced[m.from_p[tp.action]])
          ts.push_back({id(a, b), m.from_p[tp.action], id(tp.target, tq.target)});
  }
  StateId init = id(p.initial(), q.initial());
  return {Lts(std::move(names), std::move(m.labels), std::move(ts), init), std::move(origin)};
}

}  // namespace gcon
