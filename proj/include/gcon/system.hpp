#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcon/component.hpp"
#include "gcon/contract.hpp"
#include "gcon/dsl_parser.hpp"
#include "gcon/error.hpp"
#include "gcon/lexer.hpp"
#include "gcon/model.hpp"

namespace gcon {

struct ChannelDecl {
  std::string name;
  std::optional<std::string> sender;
  std::optional<std::string> receiver;
};

// A named alternative behaviour file for one component, used for
// mutation demos: `mutant "name" : "orig.pml" => "replacement.pml";`
struct MutantDecl {
  std::string name;
  std::string original;
  std::string replacement;
};

struct ComponentRef {
  std::string behaviour;  // path relative to the system file
  std::string contract;
};

struct SystemFile {
  std::string name;
  std::vector<ComponentRef> components;
  std::vector<ChannelDecl> channels;
  std::optional<std::int32_t> tick_cap;
  std::map<std::string, Narrowing> narrow;
  std::vector<MutantDecl> mutants;
};

struct SystemSpec {
  std::string name;
  std::vector<WellStructuredComponent> components;
  std::vector<ChannelDecl> channels;
  std::optional<std::int32_t> tick_cap;
  std::map<std::string, Narrowing> narrow;  // limits carried by the model file
  std::optional<std::string> mutant;        // applied mutant, if any
};

namespace detail {

inline std::string parse_var_key(TokenStream& ts) {
  std::string key = ts.expect_identifier("variable").text;
  if (ts.accept(".")) key += "." + ts.expect_identifier("variable").text;
  return key;
}

}  // namespace detail

// Parses a `.mrt` system description:
//   system <name>;
//   [tick_cap <n>;]
//   component "<file.pml>" contract "<file.ctr>";
//   channel <name> [: <sender> -> <receiver>];
//   narrow <var> = <lo>..<hi>;
//   mutant "<name>" : "<file.pml>" => "<file.pml>";
inline SystemFile parse_system_file(std::string_view text, const std::string& source = {}) {
  TokenStream ts(tokenize(text, source), source);
  SystemFile f;
  ts.expect("system");
  f.name = ts.expect_identifier("system name").text;
  ts.expect(";");
  while (!ts.at_end()) {
    if (ts.accept("tick_cap")) {
      auto n = ts.expect_integer();
      if (n < 1) ts.fail("tick_cap must be positive");
      f.tick_cap = n;
    } else if (ts.accept("component")) {
      ComponentRef r;
      r.behaviour = ts.expect_string();
      ts.expect("contract");
      r.contract = ts.expect_string();
      f.components.push_back(std::move(r));
    } else if (ts.accept("channel")) {
      ChannelDecl c;
      c.name = ts.expect_identifier("channel name").text;
      for (const auto& other : f.channels)
        if (other.name == c.name) ts.fail("duplicate channel '" + c.name + "'");
      if (ts.accept(":")) {
        c.sender = ts.expect_identifier("sender component").text;
        ts.expect("->");
        c.receiver = ts.expect_identifier("receiver component").text;
      }
      f.channels.push_back(std::move(c));
    } else if (ts.accept("narrow")) {
      auto key = detail::parse_var_key(ts);
      ts.expect("=");
      Narrowing n;
      n.lo = ts.expect_integer();
      ts.expect("..");
      n.hi = ts.expect_integer();
      if (n.lo > n.hi) ts.fail("empty range for '" + key + "'");
      f.narrow[key] = n;
    } else if (ts.accept("mutant")) {
      MutantDecl m;
      m.name = ts.expect_string();
      ts.expect(":");
      m.original = ts.expect_string();
      ts.expect("=>");
      m.replacement = ts.expect_string();
      f.mutants.push_back(std::move(m));
    } else {
      ts.fail("expected tick_cap, component, channel, narrow or mutant but found " + TokenStream::describe(ts.peek()));
    }
    ts.expect(";");
  }
  if (f.components.empty()) ts.fail("system declares no components");
  return f;
}

// Problems found while loading a system, one per offending file.
class LoadError : public Error {
 public:
  explicit LoadError(std::vector<std::string> problems) : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& ps) {
    std::string out;
    for (const auto& p : ps) out += (out.empty() ? "" : "\n") + p;
    return out;
  }
  std::vector<std::string> problems_;
};

namespace detail {

inline void collect(std::vector<std::string>& into, const std::exception& e) {
  if (const auto* r = dynamic_cast<const ResolveError*>(&e)) {
    for (const auto& p : r->problems()) into.push_back(p);
  } else {
    into.push_back(e.what());
  }
}

}  // namespace detail

// Loads the system file and every component/contract it references, parsing
// and normalizing each. All diagnostics are gathered before failing.
inline SystemSpec load_system(const std::filesystem::path& path, const std::optional<std::string>& mutant = {},
                              std::int32_t default_timer_cap = kDefaultTimerCap) {
  if (!std::filesystem::exists(path)) throw Error("no such file: '" + path.string() + "'");
  auto file = parse_system_file(read_text_file(path), path.filename().string());
  const auto dir = path.parent_path();
  std::map<std::string, std::string> substitute;
  if (mutant) {
    const MutantDecl* m = nullptr;
    for (const auto& x : file.mutants)
      if (x.name == *mutant) m = &x;
    if (!m) {
      std::string known;
      for (const auto& x : file.mutants) known += (known.empty() ? "" : ", ") + x.name;
      throw Error("unknown mutant '" + *mutant + "'" + (known.empty() ? "" : " (known: " + known + ")"));
    }
    substitute[m->original] = m->replacement;
  }
  SystemSpec s;
  s.name = file.name;
  s.channels = file.channels;
  s.tick_cap = file.tick_cap;
  s.narrow = file.narrow;
  s.mutant = mutant;
  std::vector<std::string> problems;
  for (const auto& ref : file.components) {
    auto behaviour = ref.behaviour;
    if (auto it = substitute.find(behaviour); it != substitute.end()) behaviour = it->second;
    std::optional<Component> comp;
    std::optional<GeneralizedContract> contract;
    try {
      comp = parse_component_file(dir / behaviour, default_timer_cap);
    } catch (const std::exception& e) {
      detail::collect(problems, e);
    }
    try {
      auto cpath = dir / ref.contract;
      if (!std::filesystem::exists(cpath)) throw Error("no such file: '" + cpath.string() + "'");
      contract = parse_contract_file(cpath);
    } catch (const std::exception& e) {
      detail::collect(problems, e);
    }
    if (!comp || !contract) continue;
    try {
      s.components.push_back(normalize(*comp, *contract));
    } catch (const std::exception& e) {
      detail::collect(problems, e);
    }
  }
  if (!problems.empty()) throw LoadError(problems);
  return s;
}

// Shared declarations of all components. A name declared by several
// components must be declared identically.
inline Declarations merge_globals(const std::vector<WellStructuredComponent>& cs) {
  Declarations out;
  for (const auto& w : cs) {
    const auto& g = w.behaviour.globals;
    for (const auto& e : g.enums) {
      if (const auto* prev = out.find_enum(e.name)) {
        if (!(*prev == e)) throw CompositionError("enumeration '" + e.name + "' is declared differently in " + w.behaviour.name);
      } else {
        out.enums.push_back(e);
      }
    }
    for (const auto& v : g.vars) {
      if (const auto* prev = out.find_var(v.name)) {
        if (!(*prev == v)) throw CompositionError("global '" + v.name + "' is declared differently in " + w.behaviour.name);
      } else {
        out.vars.push_back(v);
      }
    }
  }
  return out;
}

// Checks that the components can be wired: every channel is declared and
// has a sender and a receiver in distinct components, declared endpoints
// match, each global has at most one writer, and timers respect tick_cap.
inline void check_composable(const SystemSpec& s) {
  std::vector<std::string> problems;
  std::set<std::string> names;
  for (const auto& w : s.components)
    if (!names.insert(w.behaviour.name).second) problems.push_back("component '" + w.behaviour.name + "' appears twice");
  try {
    merge_globals(s.components);
  } catch (const CompositionError& e) {
    problems.push_back(e.what());
  }
  std::map<std::string, std::set<std::string>> senders, receivers;
  for (const auto& w : s.components) {
    for (const auto& c : w.behaviour.channels(SyncDir::send)) senders[c].insert(w.behaviour.name);
    for (const auto& c : w.behaviour.channels(SyncDir::receive)) receivers[c].insert(w.behaviour.name);
  }
  std::set<std::string> used;
  for (const auto& [c, _] : senders) used.insert(c);
  for (const auto& [c, _] : receivers) used.insert(c);
  for (const auto& c : used) {
    const ChannelDecl* decl = nullptr;
    for (const auto& d : s.channels)
      if (d.name == c) decl = &d;
    if (!decl) problems.push_back("channel '" + c + "' is used but not declared in the system");
    const auto& snd = senders[c];
    const auto& rcv = receivers[c];
    if (!snd.empty() && rcv.empty()) problems.push_back("channel '" + c + "' has a sender but no receiver");
    if (snd.empty() && !rcv.empty()) problems.push_back("channel '" + c + "' has a receiver but no sender");
    if (snd.size() == 1 && rcv.size() == 1 && snd == rcv)
      problems.push_back("channel '" + c + "' is only used inside " + *snd.begin());
    if (decl && decl->sender && !snd.empty() && (snd.size() != 1 || *snd.begin() != *decl->sender))
      problems.push_back("channel '" + c + "' is declared with sender " + *decl->sender + " but is sent by another component");
    if (decl && decl->receiver && !rcv.empty() && (rcv.size() != 1 || *rcv.begin() != *decl->receiver))
      problems.push_back("channel '" + c + "' is declared with receiver " + *decl->receiver +
                         " but is received by another component");
  }
  std::map<std::string, std::vector<std::string>> writers;
  for (const auto& w : s.components)
    for (const auto& g : w.behaviour.written_globals()) writers[g].push_back(w.behaviour.name);
  for (const auto& [g, ws] : writers)
    if (ws.size() > 1) {
      std::string list;
      for (const auto& n : ws) list += (list.empty() ? "" : ", ") + n;
      problems.push_back("global '" + g + "' is written by several components (" + list + ")");
    }
  if (s.tick_cap)
    for (const auto& w : s.components) {
      auto check = [&](const VarDecl& v) {
        if (v.timer && v.domain.hi > *s.tick_cap)
          problems.push_back("timer '" + v.name + "' cap " + std::to_string(v.domain.hi) + " exceeds tick_cap " +
                             std::to_string(*s.tick_cap));
      };
      for (const auto& v : w.behaviour.globals.vars) check(v);
      for (const auto& v : w.behaviour.locals) check(v);
    }
  if (!problems.empty()) {
    std::sort(problems.begin(), problems.end());
    problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
    std::string msg = "components are not composable:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw CompositionError(msg);
  }
}

inline Program system_program(const SystemSpec& s) {
  check_composable(s);
  Program p;
  p.globals = merge_globals(s.components);
  p.mode = SyncMode::rendezvous;
  for (const auto& w : s.components) p.components.push_back(w.behaviour);
  return p;
}

// Explores all components together: internal options interleave, each send
// fires jointly with a matching receive of another component (sender's
// effects first), and every timer advances on the shared tick. The
// system's own narrowing limits are combined with those in `opts`.
inline StateSpace compose_system(const SystemSpec& s, ExploreOptions opts = {}) {
  auto prog = system_program(s);
  for (const auto& [k, n] : s.narrow) opts.narrow.emplace(k, n);
  return explore(prog, opts);
}

}  // namespace gcon
