#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcon/error.hpp"
#include "gcon/lts.hpp"
#include "gcon/model.hpp"
#include "gcon/prop_lang.hpp"

namespace gcon {

enum class Status { pass, fail, skipped, assumption_violated, error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::skipped: return "SKIPPED";
    case Status::assumption_violated: return "ASSUMPTION_VIOLATED";
    case Status::error: return "ERROR";
  }
  return "?";
}

struct Verdict {
  Status status = Status::pass;
  std::string property;
  std::optional<Trace> witness;
  std::size_t states_explored = 0;
  std::chrono::nanoseconds duration{0};
  std::string message;  // reason for ERROR
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::chrono::nanoseconds elapsed() const { return std::chrono::steady_clock::now() - start_; }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline Verdict error_verdict(const Property& p, std::string msg, const Stopwatch& sw) {
  Verdict v;
  v.status = Status::error;
  v.property = p.name;
  v.message = std::move(msg);
  v.duration = sw.elapsed();
  return v;
}

inline Trace path_to(const Lts& l, const std::vector<StateId>& parent, const std::vector<ActionId>& via, StateId s) {
  Trace t;
  t.origin = l.initial();
  while (s != l.initial()) {
    t.steps.push_back({parent[s], via[s], s});
    s = parent[s];
  }
  std::reverse(t.steps.begin(), t.steps.end());
  return t;
}

}  // namespace detail

// Initially-properties: every admissible initial state satisfies the body.
inline Verdict check_init(const StateSpace& m, const Property& p) {
  detail::Stopwatch sw;
  if (p.modality != Modality::initially)
    return detail::error_verdict(p, "check_init needs an 'initially' property", sw);
  BoundExpr body;
  try {
    body = BoundExpr::bind(p.body, m.layout());
  } catch (const EvalError& e) {
    return detail::error_verdict(p, e.what(), sw);
  }
  Verdict v;
  v.property = p.name;
  for (auto s : m.initial_states()) {
    ++v.states_explored;
    if (!body.test(m.state(s))) {
      v.status = Status::fail;
      Trace t;
      t.origin = m.lts().initial();
      if (m.has_root()) {
        const auto& out = m.lts().outgoing(t.origin);
        for (const auto& tr : out)
          if (tr.target == s) {
            t.steps.push_back({tr.source, tr.action, tr.target});
            break;
          }
      }
      v.witness = std::move(t);
      break;
    }
  }
  v.duration = sw.elapsed();
  return v;
}

// `always e`: e holds in every reachable state. `never e`: e holds in none.
// The search is breadth-first in transition order, so a FAIL witness is a
// shortest path to a violating state and is the same on every run.
inline Verdict check_invariant(const StateSpace& m, const Property& p) {
  if (p.modality == Modality::initially) return check_init(m, p);
  detail::Stopwatch sw;
  BoundExpr body;
  try {
    body = BoundExpr::bind(p.body, m.layout());
  } catch (const EvalError& e) {
    return detail::error_verdict(p, e.what(), sw);
  }
  const auto& l = m.lts();
  const bool want = p.modality == Modality::always;
  Verdict v;
  v.property = p.name;
  std::vector<char> seen(l.state_count(), 0);
  std::vector<StateId> parent(l.state_count(), 0);
  std::vector<ActionId> via(l.state_count(), 0);
  std::deque<StateId> queue{l.initial()};
  seen[l.initial()] = 1;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    if (!m.is_root(s)) {
      ++v.states_explored;
      if (body.test(m.state(s)) != want) {
        v.status = Status::fail;
        v.witness = detail::path_to(l, parent, via, s);
        break;
      }
    }
    for (const auto& t : l.outgoing(s)) {
      if (seen[t.target]) continue;
      seen[t.target] = 1;
      parent[t.target] = s;
      via[t.target] = t.action;
      queue.push_back(t.target);
    }
  }
  v.duration = sw.elapsed();
  return v;
}

// True iff t starts at the initial state and every step is a transition.
inline bool replay(const Lts& l, const Trace& t) {
  if (t.origin != l.initial() || !t.connected()) return false;
  for (const auto& s : t.steps) {
    if (s.source >= l.state_count() || s.target >= l.state_count() || s.action >= l.alphabet().size()) return false;
    if (!l.has_transition(s.source, s.action, s.target)) return false;
  }
  return true;
}

inline bool replay(const StateSpace& m, const Trace& t) { return replay(m.lts(), t); }

// Numbered steps `k: (locations) --action--> (locations)` followed by the
// variables whose value changed on that step.
inline std::string render_witness(const StateSpace& m, const Trace& t) {
  std::ostringstream os;
  const auto& layout = m.layout();
  const auto base = layout.components.size();
  auto values = [&](StateId s) {
    std::string out;
    const auto* x = m.state(s);
    for (std::size_t i = 0; i < layout.vars.size(); ++i)
      out += (out.empty() ? "" : " ") + layout.vars[i].key + "=" + layout.render_value(layout.vars[i], x[base + i]);
    return out;
  };
  if (t.steps.empty() || !m.is_root(t.origin)) os << "0: " << m.locations_of(t.origin) << "  " << values(t.origin) << "\n";
  std::size_t k = 0;
  for (const auto& s : t.steps) {
    ++k;
    os << k << ": " << m.locations_of(s.source) << " --" << m.lts().action(s.action).name << "--> "
       << m.locations_of(s.target);
    if (m.is_root(s.source)) {
      os << "  " << values(s.target);
    } else {
      const auto* a = m.state(s.source);
      const auto* b = m.state(s.target);
      std::string delta;
      for (std::size_t i = 0; i < layout.vars.size(); ++i)
        if (a[base + i] != b[base + i])
          delta += (delta.empty() ? "" : " ") + layout.vars[i].key + "=" + layout.render_value(layout.vars[i], b[base + i]);
      if (!delta.empty()) os << "  " << delta;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace gcon
