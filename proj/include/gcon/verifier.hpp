#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcon/checker.hpp"
#include "gcon/contract.hpp"
#include "gcon/model.hpp"
#include "gcon/system.hpp"

namespace gcon {

struct Layer {
  FacetId facet;
  int priority = 0;
};

// Union of all facets; each takes the smallest priority any component gives
// it, ties ordered by name.
inline std::vector<Layer> merge_layer_orders(const std::vector<WellStructuredComponent>& cs) {
  std::map<FacetId, int> best;
  for (const auto& w : cs)
    for (const auto& s : w.contract.facets) {
      if (!s.priority)
        throw ModelError("facet '" + s.facet.name() + "' of " + w.behaviour.name + " has no priority");
      auto [it, fresh] = best.emplace(s.facet, *s.priority);
      if (!fresh) it->second = std::min(it->second, *s.priority);
    }
  std::vector<Layer> out;
  for (const auto& [f, p] : best) out.push_back({f, p});
  std::stable_sort(out.begin(), out.end(), [](const Layer& a, const Layer& b) { return a.priority < b.priority; });
  return out;
}

struct PropertyResult {
  std::string component;
  Role role = Role::guarantee;
  Property property;
  Verdict verdict;
  std::string witness_text;  // rendered witness, empty if none
};

struct LayerResult {
  Layer layer;
  std::vector<PropertyResult> results;
};

struct VerificationReport {
  std::string system;
  std::vector<LayerResult> layers;
  std::optional<FacetId> short_circuited_at;
  std::optional<std::string> error;  // the system could not be built
  std::map<std::string, Narrowing> overrides;
  std::optional<std::string> mutant;
  std::size_t states = 0;
  std::size_t pruned_transitions = 0;

  std::map<Status, std::size_t> totals() const {
    std::map<Status, std::size_t> t;
    for (auto s : {Status::pass, Status::fail, Status::skipped, Status::assumption_violated, Status::error}) t[s] = 0;
    for (const auto& l : layers)
      for (const auto& r : l.results) ++t[r.verdict.status];
    return t;
  }

  // PASS when every evaluated verdict passed, ERROR when something could
  // not be evaluated, FAIL otherwise.
  Status overall() const {
    if (error) return Status::error;
    auto t = totals();
    if (t[Status::fail] || t[Status::assumption_violated]) return Status::fail;
    if (t[Status::error]) return Status::error;
    return Status::pass;
  }

  int exit_code() const { return overall() == Status::pass ? 0 : 1; }
};

struct VerifyOptions {
  bool short_circuit = true;
  ExploreOptions explore;
};

namespace detail {

inline bool blocking(Status s) { return s == Status::fail || s == Status::assumption_violated; }

inline PropertyResult skipped(const std::string& comp, Role role, const Property& p) {
  PropertyResult r{comp, role, p, {}, {}};
  r.verdict.status = Status::skipped;
  r.verdict.property = p.name;
  return r;
}

inline PropertyResult errored(const std::string& comp, Role role, const Property& p, const std::string& msg) {
  PropertyResult r{comp, role, p, {}, {}};
  r.verdict.status = Status::error;
  r.verdict.property = p.name;
  r.verdict.message = msg;
  return r;
}

// Runs the layers in order. `check` produces the result of one property;
// nullopt means "not part of this run" (skipped silently).
template <typename Check>
void run_layers(VerificationReport& rep, const std::vector<WellStructuredComponent>& cs, const VerifyOptions& opts,
                Check&& check) {
  for (const auto& layer : merge_layer_orders(cs)) {
    LayerResult lr{layer, {}};
    const bool skip = rep.short_circuited_at.has_value();
    for (const auto& w : cs) {
      const auto* sec = w.contract.find(layer.facet);
      if (!sec) continue;
      for (auto role : {Role::assume, Role::guarantee})
        for (const auto& p : ordered_properties(*sec, role)) {
          if (skip) {
            lr.results.push_back(skipped(w.behaviour.name, role, p));
            continue;
          }
          if (auto r = check(w, role, p)) lr.results.push_back(std::move(*r));
        }
    }
    if (!skip && opts.short_circuit &&
        std::any_of(lr.results.begin(), lr.results.end(), [](const PropertyResult& r) { return blocking(r.verdict.status); }))
      rep.short_circuited_at = layer.facet;
    rep.layers.push_back(std::move(lr));
  }
}

}  // namespace detail

// Composes the system once, then checks the layers in priority order. Within
// a layer every assume and guarantee of every component is checked; a
// violated assume is reported as ASSUMPTION_VIOLATED. After a layer with a
// FAIL or ASSUMPTION_VIOLATED, all later layers are SKIPPED unless
// short-circuiting is off.
inline VerificationReport verify_system(const SystemSpec& s, const VerifyOptions& opts = {}) {
  VerificationReport rep;
  rep.system = s.name;
  rep.mutant = s.mutant;
  rep.overrides = s.narrow;
  for (const auto& [k, n] : opts.explore.narrow) rep.overrides[k] = n;
  std::optional<StateSpace> space;
  std::string limit_error;
  try {
    space = compose_system(s, opts.explore);
    rep.states = space->state_count();
    rep.pruned_transitions = space->pruned_transitions();
  } catch (const StateLimitError& e) {
    limit_error = e.what();
  } catch (const std::exception& e) {
    rep.error = e.what();
    return rep;
  }
  detail::run_layers(rep, s.components, opts,
                     [&](const WellStructuredComponent& w, Role role, const Property& p) -> std::optional<PropertyResult> {
                       if (!space) return detail::errored(w.behaviour.name, role, p, limit_error);
                       PropertyResult r{w.behaviour.name, role, p, check_invariant(*space, p), {}};
                       if (role == Role::assume && r.verdict.status == Status::fail)
                         r.verdict.status = Status::assumption_violated;
                       if (r.verdict.witness) r.witness_text = render_witness(*space, *r.verdict.witness);
                       return r;
                     });
  return rep;
}

struct ComponentVerification {
  VerificationReport report;
  bool needs_composition = false;
};

// Checks one component on its own. Its assumes restrict what is explored:
// `initially` assumes filter the initial states, the others drop every
// state that violates them. Components that synchronize on channels cannot
// be closed this way and are reported as needing composition.
inline ComponentVerification verify_component(const WellStructuredComponent& w, const VerifyOptions& opts = {}) {
  ComponentVerification out;
  auto& rep = out.report;
  rep.system = w.behaviour.name;
  rep.overrides = opts.explore.narrow;
  auto chans = w.behaviour.channels();
  if (!chans.empty()) {
    out.needs_composition = true;
    std::string list;
    for (const auto& c : chans) list += (list.empty() ? "" : ", ") + c;
    rep.error = "needs composition: " + w.behaviour.name + " synchronizes on " + list;
    return out;
  }
  std::vector<Expr> init_assumes, state_assumes;
  for (const auto& sec : w.contract.facets)
    for (const auto& cp : sec.assumes) {
      const auto& p = cp.property;
      if (p.modality == Modality::initially) init_assumes.push_back(p.body);
      else if (p.modality == Modality::always) state_assumes.push_back(p.body);
      else state_assumes.push_back(ex::not_(p.body));
    }
  auto opts2 = opts.explore;
  std::optional<StateSpace> space;
  try {
    Program prog;
    prog.components.push_back(w.behaviour);
    prog.globals = w.behaviour.globals;
    const auto layout = layout_of(prog);
    auto make_filter = [&](const std::vector<Expr>& bodies) {
      std::vector<BoundExpr> bound;
      for (const auto& b : bodies) bound.push_back(BoundExpr::bind(b, layout));
      return [bound](const Layout&, const std::int32_t* x) {
        return std::all_of(bound.begin(), bound.end(), [&](const BoundExpr& e) { return e.test(x); });
      };
    };
    if (!state_assumes.empty()) opts2.admit = make_filter(state_assumes);
    if (!init_assumes.empty()) opts2.admit_initial = make_filter(init_assumes);
    space = explore(prog, opts2);
    rep.states = space->state_count();
    rep.pruned_transitions = space->pruned_transitions();
  } catch (const std::exception& e) {
    rep.error = e.what();
    return out;
  }
  detail::run_layers(rep, {w}, opts,
                     [&](const WellStructuredComponent& c, Role role, const Property& p) -> std::optional<PropertyResult> {
                       if (role == Role::assume) return std::nullopt;
                       PropertyResult r{c.behaviour.name, role, p, check_invariant(*space, p), {}};
                       if (r.verdict.witness) r.witness_text = render_witness(*space, *r.verdict.witness);
                       return r;
                     });
  return out;
}

}  // namespace gcon
