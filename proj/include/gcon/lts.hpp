#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gcon/error.hpp"

namespace gcon {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

inline constexpr std::string_view kTauName = "tau";

enum class ActionKind { visible, internal };

struct ActionLabel {
  std::string name;
  ActionKind kind = ActionKind::visible;

  static ActionLabel tau() { return {std::string(kTauName), ActionKind::internal}; }
  static ActionLabel visible(std::string name) { return {std::move(name), ActionKind::visible}; }

  bool internal() const { return kind == ActionKind::internal; }

  friend bool operator==(const ActionLabel&, const ActionLabel&) = default;
  friend auto operator<=>(const ActionLabel& a, const ActionLabel& b) {
    return std::tie(a.name, a.kind) <=> std::tie(b.name, b.kind);
  }
};

struct Transition {
  StateId source = 0;
  ActionId action = 0;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

// A labelled transition system (states, alphabet, transition relation,
// initial state). Immutable once built; the constructor validates every
// invariant and normalizes ordering so that equal systems compare equal.
//
// Alphabet entries are kept sorted by name, so action ids follow the name
// order and transitions sorted by (source, action, target) realize the
// exploration order used everywhere else.
class Lts {
 public:
  Lts() : Lts({"s0"}, {}, {}, 0) {}

  Lts(std::vector<std::string> states, std::vector<ActionLabel> alphabet,
      std::vector<Transition> transitions, StateId initial)
      : states_(std::move(states)), initial_(initial) {
    validate_states();
    index_states();
    // sort alphabet and remap transition action ids
    std::vector<ActionId> order(alphabet.size());
    for (ActionId i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](ActionId a, ActionId b) { return alphabet[a] < alphabet[b]; });
    std::vector<ActionId> remap(alphabet.size());
    alphabet_.reserve(alphabet.size());
    for (ActionId i = 0; i < order.size(); ++i) {
      remap[order[i]] = i;
      alphabet_.push_back(std::move(alphabet[order[i]]));
    }
    validate_alphabet();
    for (auto& t : transitions) {
      if (t.source >= states_.size() || t.target >= states_.size())
        throw ModelError("transition endpoint outside the state set");
      if (t.action >= remap.size()) throw ModelError("transition label outside the alphabet");
      t.action = remap[t.action];
    }
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
    transitions_ = std::move(transitions);
    offsets_.assign(states_.size() + 1, 0);
    for (const auto& t : transitions_) ++offsets_[t.source + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  }

  std::size_t state_count() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateId s) const { return states_.at(s); }
  StateId initial() const { return initial_; }

  const std::vector<ActionLabel>& alphabet() const { return alphabet_; }
  const ActionLabel& action(ActionId a) const { return alphabet_.at(a); }

  const std::vector<Transition>& transitions() const { return transitions_; }

  std::span<const Transition> outgoing(StateId s) const {
    return {transitions_.data() + offsets_.at(s), transitions_.data() + offsets_.at(s + 1)};
  }

  std::optional<StateId> find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<ActionId> find_action(std::string_view name) const {
    for (ActionId i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i].name == name) return i;
    return std::nullopt;
  }

  std::optional<ActionId> tau_id() const {
    for (ActionId i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i].internal()) return i;
    return std::nullopt;
  }

  bool has_transition(StateId s, ActionId a, StateId t) const {
    auto out = outgoing(s);
    return std::binary_search(out.begin(), out.end(), Transition{s, a, t});
  }

  // Transition triples by name; convenient for set comparisons.
  std::set<std::tuple<std::string, std::string, std::string>> named_transitions() const {
    std::set<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& t : transitions_)
      out.emplace(states_[t.source], alphabet_[t.action].name, states_[t.target]);
    return out;
  }

 private:
  void validate_states() const {
    if (states_.empty()) throw ModelError("an LTS needs at least one state");
    if (initial_ >= states_.size()) throw ModelError("initial state is not a member of the state set");
  }

  void index_states() {
    index_.reserve(states_.size());
    for (StateId i = 0; i < states_.size(); ++i)
      if (!index_.emplace(states_[i], i).second)
        throw ModelError("duplicate state identifier '" + states_[i] + "'");
  }

  void validate_alphabet() const {
    int internal = 0;
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      const auto& a = alphabet_[i];
      if (a.internal()) {
        ++internal;
        if (a.name != kTauName) throw ModelError("the internal action must be named tau");
      } else {
        if (a.name.empty()) throw ModelError("visible action with empty name");
        if (a.name == kTauName) throw ModelError("'tau' is reserved for the internal action");
      }
      if (i > 0 && alphabet_[i - 1].name == a.name)
        throw ModelError("duplicate action '" + a.name + "' in alphabet");
    }
    if (internal > 1) throw ModelError("more than one internal action");
  }

  std::vector<std::string> states_;
  std::vector<ActionLabel> alphabet_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
  StateId initial_ = 0;
  std::unordered_map<std::string, StateId> index_;
};

// Builds an LTS from (source, action, target) name triples. The action name
// "tau" denotes the internal action. States are numbered in order of first
// appearance, starting with the initial state.
inline Lts make_lts(const std::string& initial,
                    const std::vector<std::tuple<std::string, std::string, std::string>>& triples,
                    const std::vector<std::string>& extra_states = {},
                    const std::vector<std::string>& extra_actions = {}) {
  std::vector<std::string> states;
  std::map<std::string, StateId> sid;
  auto state = [&](const std::string& n) {
    auto [it, fresh] = sid.emplace(n, static_cast<StateId>(states.size()));
    if (fresh) states.push_back(n);
    return it->second;
  };
  std::vector<ActionLabel> alphabet;
  std::map<std::string, ActionId> aid;
  auto action = [&](const std::string& n) {
    auto [it, fresh] = aid.emplace(n, static_cast<ActionId>(alphabet.size()));
    if (fresh) alphabet.push_back(n == kTauName ? ActionLabel::tau() : ActionLabel::visible(n));
    return it->second;
  };
  state(initial);
  for (const auto& s : extra_states) state(s);
  for (const auto& a : extra_actions) action(a);
  std::vector<Transition> ts;
  for (const auto& [s, a, t] : triples) {
    StateId src = state(s);
    ActionId act = action(a);
    ts.push_back({src, act, state(t)});
  }
  return Lts(std::move(states), std::move(alphabet), std::move(ts), 0);
}

struct TraceStep {
  StateId source = 0;
  ActionId action = 0;
  StateId target = 0;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

// A path through an LTS starting at `origin`.
struct Trace {
  StateId origin = 0;
  std::vector<TraceStep> steps;

  bool connected() const {
    StateId at = origin;
    for (const auto& s : steps) {
      if (s.source != at) return false;
      at = s.target;
    }
    return true;
  }
  StateId last() const { return steps.empty() ? origin : steps.back().target; }
  std::size_t size() const { return steps.size(); }
  friend bool operator==(const Trace&, const Trace&) = default;
};

// States on some directed path from the initial state, in ascending id order.
inline std::vector<StateId> reachable_states(const Lts& l) {
  std::vector<char> seen(l.state_count(), 0);
  std::vector<StateId> stack{l.initial()};
  seen[l.initial()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& t : l.outgoing(s)) {
      if (!seen[t.target]) {
        seen[t.target] = 1;
        stack.push_back(t.target);
      }
    }
  }
  std::vector<StateId> out;
  for (StateId s = 0; s < seen.size(); ++s)
    if (seen[s]) out.push_back(s);
  return out;
}

// All states reachable from s through internal transitions only (including s).
inline std::vector<StateId> tau_closure(const Lts& l, StateId s) {
  if (s >= l.state_count()) throw ModelError("unknown state id " + std::to_string(s));
  auto tau = l.tau_id();
  std::vector<char> seen(l.state_count(), 0);
  std::vector<StateId> stack{s};
  seen[s] = 1;
  while (!stack.empty() && tau) {
    StateId u = stack.back();
    stack.pop_back();
    for (const auto& t : l.outgoing(u)) {
      if (t.action == *tau && !seen[t.target]) {
        seen[t.target] = 1;
        stack.push_back(t.target);
      }
    }
  }
  std::vector<StateId> out;
  for (StateId u = 0; u < seen.size(); ++u)
    if (seen[u]) out.push_back(u);
  return out;
}

inline std::vector<StateId> tau_closure(const Lts& l, std::string_view state) {
  auto s = l.find_state(state);
  if (!s) throw ModelError("unknown state '" + std::string(state) + "'");
  return tau_closure(l, *s);
}

namespace detail {
inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

// Graphviz rendering: one node per state, the initial state marked with an
// incoming arrow from an invisible point node, edges labelled by action name.
inline std::string to_dot(const Lts& l, std::string_view graph_name = "lts") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(graph_name) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  __init [shape=point];\n";
  for (StateId s = 0; s < l.state_count(); ++s) {
    os << "  s" << s << " [label=\"" << detail::dot_escape(l.state_name(s)) << "\"";
    if (s == l.initial()) os << ", peripheries=2";
    os << "];\n";
  }
  os << "  __init -> s" << l.initial() << ";\n";
  for (const auto& t : l.transitions()) {
    const auto& a = l.action(t.action);
    os << "  s" << t.source << " -> s" << t.target << " [label=\""
       << (a.internal() ? std::string(kTauName) : detail::dot_escape(a.name)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gcon
