#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gcon/component.hpp"
#include "gcon/error.hpp"
#include "gcon/expr.hpp"
#include "gcon/lts.hpp"

namespace gcon {

inline constexpr std::string_view kTickName = "tick";
inline constexpr std::size_t kDefaultStateLimit = 10'000'000;

struct Slot {
  std::string key;  // "x" or "Comp.x"
  Domain domain;    // declared
  bool timer = false;
  int owner = -1;   // component index, -1 for globals
};

// Shape of a state vector: one location index per component followed by one
// value per variable (globals first, then each component's locals).
struct Layout {
  std::vector<std::string> components;
  std::vector<std::vector<std::string>> locations;
  std::vector<Slot> vars;
  std::map<std::string, EnumType> enums;

  std::size_t width() const { return components.size() + vars.size(); }

  std::optional<std::size_t> component_index(const std::string& name) const {
    for (std::size_t i = 0; i < components.size(); ++i)
      if (components[i] == name) return i;
    return std::nullopt;
  }
  // absolute slot of a variable key
  std::optional<std::size_t> var_slot(const std::string& key) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].key == key) return components.size() + i;
    return std::nullopt;
  }
  std::optional<std::size_t> location_index(const std::string& comp, const std::string& loc) const {
    auto c = component_index(comp);
    if (!c) return std::nullopt;
    const auto& ls = locations[*c];
    for (std::size_t i = 0; i < ls.size(); ++i)
      if (ls[i] == loc) return i;
    return std::nullopt;
  }
  const Slot& slot(std::size_t abs) const { return vars.at(abs - components.size()); }

  std::string render_value(const Slot& s, std::int32_t v) const {
    switch (s.domain.type.base) {
      case BaseType::boolean: return v ? "true" : "false";
      case BaseType::enumeration: {
        auto it = enums.find(s.domain.type.enum_name);
        if (it != enums.end() && v >= 0 && static_cast<std::size_t>(v) < it->second.constants.size())
          return it->second.constants[static_cast<std::size_t>(v)];
        return std::to_string(v);
      }
      default: return std::to_string(v);
    }
  }
};

// An expression compiled against a Layout into postfix code over slots.
class BoundExpr {
 public:
  BoundExpr() = default;

  std::int64_t eval(const std::int32_t* state) const {
    std::array<std::int64_t, 48> small;
    std::vector<std::int64_t> big;
    std::int64_t* st = small.data();
    if (depth_ > small.size()) {
      big.resize(depth_);
      st = big.data();
    }
    std::size_t sp = 0;
    for (const auto& in : code_) {
      switch (in.op) {
        case Op::push: st[sp++] = in.a; break;
        case Op::load: st[sp++] = state[in.a]; break;
        case Op::at_loc: st[sp++] = state[in.a] == in.b ? 1 : 0; break;
        case Op::neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::add: --sp; st[sp - 1] += st[sp]; break;
        case Op::sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::cmp: {
          --sp;
          auto a = st[sp - 1], b = st[sp];
          bool r = false;
          switch (in.cmp) {
            case CmpOp::eq: r = a == b; break;
            case CmpOp::ne: r = a != b; break;
            case CmpOp::lt: r = a < b; break;
            case CmpOp::le: r = a <= b; break;
            case CmpOp::gt: r = a > b; break;
            case CmpOp::ge: r = a >= b; break;
          }
          st[sp - 1] = r;
          break;
        }
        case Op::member: {
          auto x = st[sp - 1];
          bool r = false;
          for (std::int32_t k = 0; k < in.b && !r; ++k) r = pool_[static_cast<std::size_t>(in.a + k)] == x;
          st[sp - 1] = r;
          break;
        }
        case Op::not_: st[sp - 1] = !st[sp - 1]; break;
        case Op::and_: --sp; st[sp - 1] = st[sp - 1] && st[sp]; break;
        case Op::or_: --sp; st[sp - 1] = st[sp - 1] || st[sp]; break;
        case Op::imply: --sp; st[sp - 1] = !st[sp - 1] || st[sp]; break;
      }
    }
    return st[0];
  }

  bool test(const std::int32_t* state) const { return eval(state) != 0; }
  bool empty() const { return code_.empty(); }

  // Throws EvalError if e mentions anything the layout does not have.
  static BoundExpr bind(const Expr& e, const Layout& layout) {
    BoundExpr b;
    std::size_t d = 0;
    b.emit(e, layout, d);
    return b;
  }

 private:
  enum class Op : std::uint8_t { push, load, at_loc, neg, add, sub, cmp, member, not_, and_, or_, imply };
  struct Instr {
    Op op = Op::push;
    CmpOp cmp = CmpOp::eq;
    std::int32_t a = 0;
    std::int32_t b = 0;
  };

  void push(Instr in, std::size_t& d) {
    code_.push_back(in);
    depth_ = std::max(depth_, d);
  }

  void emit(const Expr& e, const Layout& layout, std::size_t& d) {
    switch (e->kind) {
      case ExprKind::int_lit:
      case ExprKind::enum_lit: ++d; push({Op::push, CmpOp::eq, e->value, 0}, d); return;
      case ExprKind::name:
      case ExprKind::qualified: throw EvalError("unresolved identifier '" + render(e) + "'");
      case ExprKind::var: {
        auto s = layout.var_slot(e->key);
        if (!s) throw EvalError("unbound variable '" + e->key + "'");
        ++d;
        push({Op::load, CmpOp::eq, static_cast<std::int32_t>(*s), 0}, d);
        return;
      }
      case ExprKind::location: {
        auto c = layout.component_index(e->qualifier);
        if (!c) throw EvalError("no component '" + e->qualifier + "' in this model");
        auto l = layout.location_index(e->qualifier, e->text);
        if (!l) throw EvalError("no location '" + render(e) + "' in this model");
        ++d;
        push({Op::at_loc, CmpOp::eq, static_cast<std::int32_t>(*c), static_cast<std::int32_t>(*l)}, d);
        return;
      }
      case ExprKind::member: {
        emit(e->args[0], layout, d);
        Instr in{Op::member, CmpOp::eq, static_cast<std::int32_t>(pool_.size()),
                 static_cast<std::int32_t>(e->args.size() - 1)};
        for (std::size_t i = 1; i < e->args.size(); ++i) pool_.push_back(e->args[i]->value);
        push(in, d);
        return;
      }
      default: break;
    }
    for (const auto& a : e->args) emit(a, layout, d);
    d -= e->args.size() - 1;
    Instr in;
    switch (e->kind) {
      case ExprKind::neg: in.op = Op::neg; break;
      case ExprKind::add: in.op = Op::add; break;
      case ExprKind::sub: in.op = Op::sub; break;
      case ExprKind::cmp: in.op = Op::cmp; in.cmp = e->op; break;
      case ExprKind::not_: in.op = Op::not_; break;
      case ExprKind::and_: in.op = Op::and_; break;
      case ExprKind::or_: in.op = Op::or_; break;
      case ExprKind::imply: in.op = Op::imply; break;
      default: throw EvalError("cannot compile expression '" + render(e) + "'");
    }
    push(in, d);
  }

  std::vector<Instr> code_;
  std::vector<std::int32_t> pool_;
  std::size_t depth_ = 0;
};

namespace detail {

// Open-addressing set of fixed-width state vectors; ids are dense and
// assigned in insertion order.
class StateStore {
 public:
  explicit StateStore(std::size_t width) : width_(width), table_(1024, kEmpty) {}

  std::size_t size() const { return count_; }
  const std::int32_t* at(std::size_t id) const { return data_.data() + id * width_; }
  const std::vector<std::int32_t>& data() const { return data_; }

  std::pair<std::uint32_t, bool> insert(const std::int32_t* v) {
    if ((count_ + 1) * 10 > table_.size() * 7) grow();
    auto h = hash(v);
    auto mask = table_.size() - 1;
    for (auto i = h & mask;; i = (i + 1) & mask) {
      auto id = table_[i];
      if (id == kEmpty) {
        table_[i] = static_cast<std::uint32_t>(count_);
        data_.insert(data_.end(), v, v + width_);
        return {static_cast<std::uint32_t>(count_++), true};
      }
      if (std::equal(v, v + width_, at(id))) return {id, false};
    }
  }

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;

  std::uint64_t hash(const std::int32_t* v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < width_; ++i) {
      h ^= static_cast<std::uint32_t>(v[i]);
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 32;
    }
    h ^= h >> 29;
    h *= 0xc4ceb9fe1a85ec53ull;
    return h ^ (h >> 32);
  }

  void grow() {
    std::vector<std::uint32_t> t(table_.size() * 2, kEmpty);
    auto mask = t.size() - 1;
    for (std::uint32_t id = 0; id < count_; ++id) {
      auto i = hash(at(id)) & mask;
      while (t[i] != kEmpty) i = (i + 1) & mask;
      t[i] = id;
    }
    table_ = std::move(t);
  }

  std::size_t width_;
  std::vector<std::uint32_t> table_;
  std::vector<std::int32_t> data_;
  std::size_t count_ = 0;
};

}  // namespace detail

// The explored state graph of a model together with each state's vector.
// When the model has several admissible initial valuations, state 0 is a
// synthetic root with one internal transition to each of them.
class StateSpace {
 public:
  StateSpace(Layout layout, Lts lts, std::vector<std::int32_t> values, bool has_root, std::size_t pruned)
      : layout_(std::move(layout)), lts_(std::move(lts)), values_(std::move(values)), has_root_(has_root),
        pruned_(pruned) {}

  const Layout& layout() const { return layout_; }
  const Lts& lts() const { return lts_; }
  bool has_root() const { return has_root_; }
  bool is_root(StateId s) const { return has_root_ && s == lts_.initial(); }
  std::size_t pruned_transitions() const { return pruned_; }
  std::size_t state_count() const { return lts_.state_count(); }

  const std::int32_t* state(StateId s) const { return values_.data() + static_cast<std::size_t>(s) * layout_.width(); }

  std::vector<StateId> initial_states() const {
    if (!has_root_) return {lts_.initial()};
    std::vector<StateId> out;
    for (const auto& t : lts_.outgoing(lts_.initial())) out.push_back(t.target);
    return out;
  }

  Valuation valuation(StateId s) const {
    Valuation v;
    const auto* x = state(s);
    for (std::size_t c = 0; c < layout_.components.size(); ++c)
      v.locations[layout_.components[c]] = layout_.locations[c][static_cast<std::size_t>(x[c])];
    for (std::size_t i = 0; i < layout_.vars.size(); ++i) v.values[layout_.vars[i].key] = x[layout_.components.size() + i];
    return v;
  }

  // "(config,awake)"
  std::string locations_of(StateId s) const {
    if (is_root(s)) return "init";
    const auto* x = state(s);
    std::string out = "(";
    for (std::size_t c = 0; c < layout_.components.size(); ++c) {
      if (c) out += ',';
      out += layout_.locations[c][static_cast<std::size_t>(x[c])];
    }
    return out + ")";
  }

 private:
  Layout layout_;
  Lts lts_;
  std::vector<std::int32_t> values_;
  bool has_root_;
  std::size_t pruned_;
};

enum class SyncMode {
  open,        // every sync edge fires alone, labelled "c!" or "c?"
  rendezvous,  // a send and a matching receive of another component fire together as "c"
};

struct Narrowing {
  std::int32_t lo = 0;
  std::int32_t hi = 0;
  friend bool operator==(const Narrowing&, const Narrowing&) = default;
};

struct ExploreOptions {
  std::size_t state_limit = kDefaultStateLimit;
  unsigned workers = 1;
  std::map<std::string, Narrowing> narrow;  // variable key -> range within the declared domain
  // States rejected by the filter are neither stored nor expanded.
  std::function<bool(const Layout&, const std::int32_t*)> admit;
  // Extra condition on initial states only.
  std::function<bool(const Layout&, const std::int32_t*)> admit_initial;
};

// Components plus the global declarations they share.
struct Program {
  std::vector<Component> components;
  Declarations globals;
  SyncMode mode = SyncMode::open;
};

namespace detail {

struct CompiledEdge {
  std::size_t comp = 0;
  std::size_t target = 0;
  BoundExpr guard;
  std::optional<Sync> sync;
  std::vector<std::pair<std::size_t, BoundExpr>> assigns;
  std::vector<std::size_t> resets;
  std::string where;
  std::vector<std::string> assign_text;
};

class Explorer {
 public:
  Explorer(const Program& prog, const ExploreOptions& opts) : prog_(prog), opts_(opts) {
    build_layout();
    compile();
  }

  StateSpace run() {
    const auto w = layout_.width();
    auto inits = initial_vectors();
    if (inits.empty()) throw ModelError("no admissible initial state");
    const bool root = inits.size() / w > 1;
    StateStore store(w);
    std::vector<std::uint32_t> frontier;
    std::vector<std::tuple<std::uint32_t, ActionId, std::uint32_t>> trans;
    for (std::size_t i = 0; i < inits.size(); i += w) {
      auto [id, fresh] = store.insert(inits.data() + i);
      if (fresh) frontier.push_back(id);
    }
    check_limit(store.size() + (root ? 1 : 0));
    std::size_t pruned = 0;
    std::vector<Succs> results;
    while (!frontier.empty()) {
      results.assign(frontier.size(), {});
      expand(store, frontier, results);
      std::vector<std::uint32_t> next;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        auto& r = results[i];
        pruned += r.pruned;
        for (auto k : r.order) {
          auto [id, fresh] = store.insert(r.data.data() + k * w);
          if (fresh) {
            next.push_back(id);
            check_limit(store.size() + (root ? 1 : 0));
          }
          trans.emplace_back(frontier[i], r.actions[k], id);
        }
      }
      frontier = std::move(next);
    }
    return finish(store, trans, root, inits.size() / w, pruned);
  }

  const Layout& layout() const { return layout_; }

 private:
  struct Succs {
    std::vector<ActionId> actions;
    std::vector<std::int32_t> data;
    std::vector<std::size_t> order;
    std::size_t pruned = 0;
  };

  void check_limit(std::size_t n) const {
    if (n > opts_.state_limit) throw StateLimitError(opts_.state_limit);
  }

  void build_layout() {
    for (const auto& e : prog_.globals.enums) layout_.enums[e.name] = e;
    for (std::size_t c = 0; c < prog_.components.size(); ++c) {
      const auto& comp = prog_.components[c];
      layout_.components.push_back(comp.name);
      std::vector<std::string> locs;
      for (const auto& l : comp.locations) locs.push_back(l.name);
      layout_.locations.push_back(std::move(locs));
      for (const auto& e : comp.globals.enums) layout_.enums.emplace(e.name, e);
    }
    for (const auto& v : prog_.globals.vars) {
      layout_.vars.push_back({v.name, v.domain, v.timer, -1});
      initial_.push_back(v.initial);
    }
    for (std::size_t c = 0; c < prog_.components.size(); ++c)
      for (const auto& v : prog_.components[c].locals) {
        layout_.vars.push_back({prog_.components[c].name + "." + v.name, v.domain, v.timer, static_cast<int>(c)});
        initial_.push_back(v.initial);
      }
    const auto base = layout_.components.size();
    for (const auto& [key, n] : opts_.narrow) {
      auto s = layout_.var_slot(key);
      if (!s) throw ModelError("cannot narrow unknown variable '" + key + "'");
      const auto& d = layout_.slot(*s).domain;
      if (n.lo > n.hi || n.lo < d.lo || n.hi > d.hi)
        throw ModelError("override " + key + "=" + std::to_string(n.lo) + ".." + std::to_string(n.hi) +
                         " does not narrow the declared domain [" + std::to_string(d.lo) + ".." +
                         std::to_string(d.hi) + "]");
      narrowed_.push_back({*s, n});
      auto& init = initial_[*s - base];
      init.erase(std::remove_if(init.begin(), init.end(), [&](std::int32_t v) { return v < n.lo || v > n.hi; }),
                 init.end());
    }
    for (std::size_t i = 0; i < layout_.vars.size(); ++i)
      if (layout_.vars[i].timer) timers_.push_back(base + i);
  }

  void compile() {
    std::set<std::string> names{std::string(kTauName), std::string(kTickName)};
    edges_.resize(prog_.components.size());
    invariants_.resize(prog_.components.size());
    for (std::size_t c = 0; c < prog_.components.size(); ++c) {
      const auto& comp = prog_.components[c];
      edges_[c].resize(comp.locations.size());
      for (const auto& l : comp.locations) invariants_[c].push_back(l.invariant ? BoundExpr::bind(l.invariant, layout_) : BoundExpr{});
      for (const auto& e : comp.edges) {
        CompiledEdge ce;
        ce.comp = c;
        ce.target = e.target;
        ce.guard = BoundExpr::bind(e.guard, layout_);
        ce.sync = e.sync;
        ce.where = comp.name + " edge at " + (comp.source.empty() ? "" : comp.source + ":") +
                   std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column);
        for (const auto& a : e.assignments) {
          auto s = layout_.var_slot(a.target);
          if (!s) throw ModelError("unbound assignment target '" + a.target + "'");
          ce.assigns.emplace_back(*s, BoundExpr::bind(a.value, layout_));
          ce.assign_text.push_back(a.spelling + " = " + render(a.value));
        }
        for (const auto& r : e.timer_resets) {
          auto s = layout_.var_slot(r);
          if (!s) throw ModelError("unbound timer '" + r + "'");
          ce.resets.push_back(*s);
        }
        if (e.sync) {
          const auto& ch = e.sync->channel;
          if (ch == kTauName || ch == kTickName) throw ModelError("channel name '" + ch + "' is reserved");
          if (prog_.mode == SyncMode::open) names.insert(e.sync->action());
          else names.insert(ch);
        }
        edges_[c][e.source].push_back(std::move(ce));
      }
    }
    action_names_.assign(names.begin(), names.end());
    for (ActionId i = 0; i < action_names_.size(); ++i) action_ids_[action_names_[i]] = i;
  }

  std::vector<std::int32_t> initial_vectors() const {
    const auto base = layout_.components.size();
    const auto w = layout_.width();
    std::vector<std::int32_t> out;
    for (const auto& choices : initial_)
      if (choices.empty()) return out;
    std::vector<std::int32_t> cur(w, 0);
    std::vector<std::size_t> idx(initial_.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < initial_.size(); ++i) cur[base + i] = initial_[i][idx[i]];
      if ((!opts_.admit || opts_.admit(layout_, cur.data())) &&
          (!opts_.admit_initial || opts_.admit_initial(layout_, cur.data())))
        out.insert(out.end(), cur.begin(), cur.end());
      std::size_t k = initial_.size();
      while (k > 0) {
        --k;
        if (++idx[k] < initial_[k].size()) break;
        idx[k] = 0;
        if (k == 0) return out;
      }
      if (initial_.empty()) return out;
    }
  }

  void apply(const CompiledEdge& e, std::int32_t* w) const {
    for (std::size_t i = 0; i < e.assigns.size(); ++i) {
      const auto& [slot, value] = e.assigns[i];
      auto v = value.eval(w);
      const auto& d = layout_.slot(slot).domain;
      if (v < d.lo || v > d.hi)
        throw ModelError("assignment '" + e.assign_text[i] + "' on " + e.where + " yields " + std::to_string(v) +
                         ", outside [" + std::to_string(d.lo) + ".." + std::to_string(d.hi) + "]");
      w[slot] = static_cast<std::int32_t>(v);
    }
    for (auto s : e.resets) w[s] = 0;
    w[e.comp] = static_cast<std::int32_t>(e.target);
  }

  void emit(Succs& out, ActionId a, const std::vector<std::int32_t>& w) const {
    for (const auto& [slot, n] : narrowed_)
      if (w[slot] < n.lo || w[slot] > n.hi) {
        ++out.pruned;
        return;
      }
    if (opts_.admit && !opts_.admit(layout_, w.data())) return;
    out.actions.push_back(a);
    out.data.insert(out.data.end(), w.begin(), w.end());
  }

  void successors(const std::int32_t* v, Succs& out) const {
    const auto width = layout_.width();
    std::vector<std::int32_t> w(v, v + width);
    for (std::size_t c = 0; c < edges_.size(); ++c) {
      for (const auto& e : edges_[c][static_cast<std::size_t>(v[c])]) {
        if (!e.guard.test(v)) continue;
        if (e.sync && prog_.mode == SyncMode::rendezvous) {
          if (e.sync->dir != SyncDir::send) continue;
          for (std::size_t d = 0; d < edges_.size(); ++d) {
            if (d == c) continue;
            for (const auto& r : edges_[d][static_cast<std::size_t>(v[d])]) {
              if (!r.sync || r.sync->dir != SyncDir::receive || r.sync->channel != e.sync->channel) continue;
              if (!r.guard.test(v)) continue;
              std::copy(v, v + width, w.begin());
              apply(e, w.data());
              apply(r, w.data());
              emit(out, action_ids_.at(e.sync->channel), w);
            }
          }
          continue;
        }
        std::copy(v, v + width, w.begin());
        apply(e, w.data());
        emit(out, action_ids_.at(e.sync ? e.sync->action() : std::string(kTauName)), w);
      }
    }
    // time step: all timers advance together, saturating at their cap, and
    // only if every current location's invariant still holds afterwards
    std::copy(v, v + width, w.begin());
    for (auto s : timers_) w[s] = std::min(w[s] + 1, layout_.slot(s).domain.hi);
    bool ok = true;
    for (std::size_t c = 0; c < invariants_.size() && ok; ++c) {
      const auto& inv = invariants_[c][static_cast<std::size_t>(w[c])];
      if (!inv.empty() && !inv.test(w.data())) ok = false;
    }
    if (ok) emit(out, action_ids_.at(std::string(kTickName)), w);

    const auto n = out.actions.size();
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
      if (out.actions[a] != out.actions[b]) return out.actions[a] < out.actions[b];
      return std::lexicographical_compare(out.data.begin() + a * width, out.data.begin() + (a + 1) * width,
                                          out.data.begin() + b * width, out.data.begin() + (b + 1) * width);
    });
    out.order.erase(std::unique(out.order.begin(), out.order.end(),
                                [&](std::size_t a, std::size_t b) {
                                  return out.actions[a] == out.actions[b] &&
                                         std::equal(out.data.begin() + a * width, out.data.begin() + (a + 1) * width,
                                                    out.data.begin() + b * width);
                                }),
                    out.order.end());
  }

  void expand(const StateStore& store, const std::vector<std::uint32_t>& frontier, std::vector<Succs>& results) const {
    const unsigned workers = std::max(1u, opts_.workers);
    if (workers == 1 || frontier.size() < 64) {
      for (std::size_t i = 0; i < frontier.size(); ++i) successors(store.at(frontier[i]), results[i]);
      return;
    }
    // Each worker handles a contiguous slice; results are merged in frontier
    // order afterwards, so numbering does not depend on the worker count.
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_at(workers, frontier.size());
    std::vector<std::thread> pool;
    const auto chunk = (frontier.size() + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        const auto lo = std::min(frontier.size(), t * chunk);
        const auto hi = std::min(frontier.size(), lo + chunk);
        for (auto i = lo; i < hi; ++i) {
          try {
            successors(store.at(frontier[i]), results[i]);
          } catch (...) {
            errors[t] = std::current_exception();
            error_at[t] = i;
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    auto first = std::min_element(error_at.begin(), error_at.end()) - error_at.begin();
    if (errors[static_cast<std::size_t>(first)]) std::rethrow_exception(errors[static_cast<std::size_t>(first)]);
  }

  std::string state_name(const std::int32_t* x) const {
    std::string out = "(";
    for (std::size_t c = 0; c < layout_.components.size(); ++c) {
      if (c) out += ',';
      out += layout_.locations[c][static_cast<std::size_t>(x[c])];
    }
    out += ')';
    for (std::size_t i = 0; i < layout_.vars.size(); ++i) {
      const auto& s = layout_.vars[i];
      out += ' ';
      out += s.key;
      out += '=';
      out += layout_.render_value(s, x[layout_.components.size() + i]);
    }
    return out;
  }

  StateSpace finish(const StateStore& store, const std::vector<std::tuple<std::uint32_t, ActionId, std::uint32_t>>& trans,
                    bool root, std::size_t n_init, std::size_t pruned) const {
    const auto w = layout_.width();
    const StateId off = root ? 1 : 0;
    std::vector<std::string> names;
    std::vector<std::int32_t> values;
    names.reserve(store.size() + off);
    if (root) {
      names.emplace_back("init");
      values.assign(w, 0);
    }
    for (std::size_t i = 0; i < store.size(); ++i) names.push_back(state_name(store.at(i)));
    values.insert(values.end(), store.data().begin(), store.data().end());
    std::vector<ActionLabel> alphabet;
    for (const auto& n : action_names_)
      alphabet.push_back(n == kTauName ? ActionLabel::tau() : ActionLabel::visible(n));
    std::vector<Transition> ts;
    ts.reserve(trans.size() + n_init);
    const auto tau = action_ids_.at(std::string(kTauName));
    if (root)
      for (StateId i = 0; i < n_init; ++i) ts.push_back({0, tau, i + 1});
    for (const auto& [s, a, t] : trans) ts.push_back({s + off, a, t + off});
    return StateSpace(layout_, Lts(std::move(names), std::move(alphabet), std::move(ts), 0), std::move(values), root,
                      pruned);
  }

  const Program& prog_;
  const ExploreOptions& opts_;
  Layout layout_;
  std::vector<std::vector<std::int32_t>> initial_;
  std::vector<std::pair<std::size_t, Narrowing>> narrowed_;
  std::vector<std::size_t> timers_;
  std::vector<std::vector<std::vector<CompiledEdge>>> edges_;  // [component][location]
  std::vector<std::vector<BoundExpr>> invariants_;             // [component][location]
  std::vector<std::string> action_names_;                      // sorted; index = ActionId
  std::map<std::string, ActionId> action_ids_;
};

}  // namespace detail

// State vector shape that explore() uses for this program.
inline Layout layout_of(const Program& prog) {
  ExploreOptions opts;
  return detail::Explorer(prog, opts).layout();
}

inline StateSpace explore(const Program& prog, const ExploreOptions& opts = {}) {
  detail::Explorer ex(prog, opts);
  return ex.run();
}

// Standalone semantics of one component: states are (location, valuation)
// pairs; internal options are tau, sync options are labelled "c!" / "c?",
// and timers advance on "tick". Globals the component sees are part of the
// state and keep their values unless the component writes them.
inline StateSpace compile_to_lts(const Component& c, const ExploreOptions& opts = {}) {
  Program p;
  p.components.push_back(c);
  p.globals = c.globals;
  p.mode = SyncMode::open;
  return explore(p, opts);
}

}  // namespace gcon
