#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gcon/compose.hpp"
#include "gcon/dsl_parser.hpp"
#include "gcon/model.hpp"
#include "gcon/system.hpp"
#include "gcon/translate.hpp"
#include "support/oracles.hpp"

using namespace gcon;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = GCON_CORPUS_DIR;
const fs::path kGolden = GCON_GOLDEN_DIR;

Component parse(const std::string& text) {
  ComponentParseOptions o;
  o.source_name = "inline.pml";
  return parse_component(text, o);
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ResolveError& e) {
    return e.problems();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

Program single(const Component& c) {
  Program p;
  p.globals = c.globals;
  p.components.push_back(c);
  return p;
}

using Step = std::tuple<std::string, std::string, std::string>;

std::set<Step> interpreter_transitions(const oracle::Interpreter& in) {
  std::set<Step> out;
  std::set<std::string> seen;
  std::vector<oracle::Interpreter::State> stack;
  for (const auto& s : in.initial())
    if (seen.insert(in.canonical(s)).second) stack.push_back(s);
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    auto from = in.canonical(s);
    for (auto& [a, t] : in.successors(s)) {
      out.emplace(from, a, in.canonical(t));
      if (seen.insert(in.canonical(t)).second) stack.push_back(t);
    }
  }
  return out;
}

std::set<std::string> explorer_states(const StateSpace& m) {
  std::set<std::string> out;
  for (StateId s = 0; s < m.state_count(); ++s)
    if (!m.is_root(s)) out.insert(oracle::Interpreter::canonical(m, s));
  return out;
}

std::set<Step> explorer_transitions(const StateSpace& m) {
  std::set<Step> out;
  for (const auto& t : m.lts().transitions())
    if (!m.is_root(t.source))
      out.emplace(oracle::Interpreter::canonical(m, t.source), m.lts().action(t.action).name,
                  oracle::Interpreter::canonical(m, t.target));
  return out;
}

void expect_matches_interpreter(const Program& p) {
  auto m = explore(p);
  oracle::Interpreter in(p);
  EXPECT_EQ(explorer_states(m), in.reachable());
  EXPECT_EQ(explorer_transitions(m), interpreter_transitions(in));
}

// Location and locals of one component, as text.
std::string project(const StateSpace& m, StateId s, const std::string& comp) {
  auto v = m.valuation(s);
  std::string out = comp + "@" + v.locations.at(comp);
  for (const auto& [k, x] : v.values)
    if (k.rfind(comp + ".", 0) == 0) out += " " + k + "=" + std::to_string(x);
  return out;
}

const char* kSender = R"(
active proctype A() {
  int[0..3] n = 0;
  TIMER_X t : 3;
a0:
  do
  :: (n < 3) -> n = n + 1;
  :: go!; t = 0; goto a1;
  od
a1:
  invariant t <= 2;
  do
  :: (t >= 1) -> back?; goto a0;
  od
}
)";

const char* kRelay = R"(
active proctype B() {
  bool busy = false;
b0:
  do
  :: go? -> busy = true; goto b1;
  od
b1:
  do
  :: relay!; goto b2;
  od
b2:
  do
  :: back!; busy = false; goto b0;
  od
}
)";

const char* kCounter = R"(
active proctype C() {
  int[0..2] k = 0;
c0:
  do
  :: (k < 2) -> relay?; k = k + 1;
  :: (k == 2) -> relay?; k = 0;
  od
}
)";

std::vector<Component> chain_components() { return {parse(kSender), parse(kRelay), parse(kCounter)}; }

// Component automaton with "c!" and "c?" both renamed to "c".
Lts relabelled(const StateSpace& m) {
  std::vector<std::tuple<std::string, std::string, std::string>> triples;
  for (auto [s, a, t] : m.lts().named_transitions()) {
    if (!a.empty() && (a.back() == '!' || a.back() == '?')) a.pop_back();
    triples.emplace_back(s, a, t);
  }
  return make_lts(m.lts().state_name(m.lts().initial()), triples, m.lts().states());
}

SyncSet shared(const Lts& p, const Lts& q) {
  auto a = oracle::alphabet_names(p);
  auto b = oracle::alphabet_names(q);
  std::set<std::string> out;
  for (const auto& x : a)
    if (b.count(x) && x != kTauName) out.insert(x);
  return SyncSet(out);
}

using Triple = std::vector<std::string>;
using TripleStep = std::tuple<Triple, std::string, Triple>;

std::set<TripleStep> triple_steps(const Lts& l, const std::function<Triple(StateId)>& proj) {
  std::set<TripleStep> out;
  for (const auto& t : l.transitions()) out.emplace(proj(t.source), l.action(t.action).name, proj(t.target));
  return out;
}

}  // namespace

TEST(ComponentParser, MinimalComponent) {
  auto c = parse("active proctype P() {\na:\n  do\n  :: goto b;\n  od\nb:\n}\n");
  EXPECT_EQ(c.name, "P");
  ASSERT_EQ(c.locations.size(), 2u);
  EXPECT_EQ(c.locations[0].name, "a");
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0].source, 0u);
  EXPECT_EQ(c.edges[0].target, 1u);
  EXPECT_FALSE(c.edges[0].sync);
}

TEST(ComponentParser, OptionWithoutGotoStays) {
  auto c = parse("bool f = false;\nproctype P() {\na:\n  do\n  :: f = true;\n  od\n}\n");
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0].target, 0u);
  ASSERT_EQ(c.edges[0].assignments.size(), 1u);
  EXPECT_EQ(c.edges[0].assignments[0].target, "f");
}

TEST(ComponentParser, EmptyDoLoopIsParseError) {
  try {
    parse("proctype P() {\na:\n  do\n  od\n}\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("do-loop without options"), std::string::npos);
    EXPECT_EQ(e.pos().line, 3u);
  }
}

TEST(ComponentParser, DuplicateLabelAndUnknownGotoCollected) {
  auto p = problems_of(
      "proctype P() {\nstart:\n  do\n  :: goto stat;\n  :: goto elsewhere;\n  od\nstart:\n}\n");
  EXPECT_TRUE(any_contains(p, "duplicate label 'start'")) << ::testing::PrintToString(p);
  EXPECT_TRUE(any_contains(p, "goto unknown label 'stat' (did you mean 'start'?)")) << ::testing::PrintToString(p);
  EXPECT_TRUE(any_contains(p, "goto unknown label 'elsewhere'"));
  EXPECT_GE(p.size(), 3u);
}

TEST(ComponentParser, MisspelledLabelInCorpusDiagnostic) {
  try {
    parse_component_file(kCorpus / "climate" / "diagnostics" / "climate_controller_confing.pml");
    FAIL() << "expected diagnostics";
  } catch (const ResolveError& e) {
    EXPECT_TRUE(any_contains(e.problems(), "goto unknown label 'config' (did you mean 'confing'?)"));
  }
}

TEST(ComponentParser, GlobalsOnlyFileHasNoProctype) {
  try {
    parse_component_file(kCorpus / "climate" / "climate_globals.pml");
    FAIL() << "expected an error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no proctype declared"), std::string::npos);
  }
}

TEST(ComponentParser, SemanticChecks) {
  EXPECT_TRUE(any_contains(problems_of("proctype P() {\na:\n  do\n  :: x!; y?; goto a;\n  od\n}\n"),
                           "more than one synchronization in one option"));
  EXPECT_TRUE(any_contains(problems_of("bool f;\nproctype P() {\na:\n  do\n  :: goto a; f = true;\n  od\n}\n"),
                           "statement after goto is unreachable"));
  EXPECT_TRUE(any_contains(problems_of("TIMER_X t : 5;\nproctype P() {\na:\n  do\n  :: t = 3;\n  od\n}\n"),
                           "timer 't' can only be reset to 0"));
  EXPECT_TRUE(any_contains(problems_of("int[0..3] x = 0;\nproctype P() {\na:\n  do\n  :: x = 7;\n  od\n}\n"),
                           "outside the domain"));
  EXPECT_FALSE(problems_of("bool f = false;\nproctype P() {\na:\n  do\n  :: f = 2;\n  od\n}\n").empty());
  EXPECT_FALSE(
      problems_of("TIMER_X t : 5;\nproctype P() {\na:\n  do\n  :: (t == 9) -> goto a;\n  od\n}\n").empty());
}

TEST(ComponentParser, ClimateControllerInventory) {
  auto c = parse_component_file(kCorpus / "climate" / "climate_controller.pml");
  EXPECT_EQ(c.name, "Climate_controller");
  std::vector<std::string> locs;
  for (const auto& l : c.locations) locs.push_back(l.name);
  EXPECT_EQ(locs, (std::vector<std::string>{"config", "start_working", "Air_condition", "AC_sleeping", "Heating", "FAN"}));
  EXPECT_EQ(c.edges.size(), 9u);
  EXPECT_EQ(c.channels(SyncDir::receive), (std::set<std::string>{"continue_sleeping", "power_c", "work_again"}));
  EXPECT_EQ(c.channels(SyncDir::send), (std::set<std::string>{"sleep"}));
  EXPECT_TRUE(c.written_globals().count("AC_comp_working"));
}

TEST(Explorer, BooleanToggleHasTwoStates) {
  auto c = parse(
      "bool f = false;\nproctype T() {\ns:\n  do\n  :: (f == false) -> f = true;\n  :: (f == true) -> f = false;\n  od\n}\n");
  auto m = compile_to_lts(c);
  ASSERT_EQ(m.state_count(), 2u);
  EXPECT_FALSE(m.has_root());
  EXPECT_EQ(m.valuation(m.lts().initial()).values.at("f"), 0);
  auto tau = m.lts().find_action("tau");
  ASSERT_TRUE(tau);
  EXPECT_TRUE(m.lts().has_transition(0, *tau, 1));
  EXPECT_TRUE(m.lts().has_transition(1, *tau, 0));
}

TEST(Explorer, TimerCountsUpAndSaturates) {
  auto c = parse("TIMER_X t : 35;\nproctype C() {\na:\n  do\n  :: (t == 35) -> goto b;\n  od\nb:\n}\n");
  auto m = compile_to_lts(c);
  std::set<std::string> expected;
  for (int v = 0; v <= 35; ++v) expected.insert("C@a t=" + std::to_string(v) + " ");
  expected.insert("C@b t=35 ");
  EXPECT_EQ(explorer_states(m), expected);
  auto tick = m.lts().find_action("tick");
  ASSERT_TRUE(tick);
  std::size_t self = 0;
  for (const auto& t : m.lts().transitions()) {
    if (t.action != *tick) continue;
    auto a = m.valuation(t.source).values.at("t");
    auto b = m.valuation(t.target).values.at("t");
    EXPECT_EQ(b, std::min(a + 1, 35));
    if (t.source == t.target) ++self;
  }
  EXPECT_EQ(self, 2u);
}

TEST(Explorer, MatchesInterpreterOnStandaloneController) {
  auto c = parse_component_file(kCorpus / "climate" / "climate_controller.pml");
  expect_matches_interpreter(single(c));
}

TEST(Explorer, MatchesInterpreterOnSyntheticComponents) {
  for (const auto* text : {kSender, kRelay, kCounter}) expect_matches_interpreter(single(parse(text)));
  Program p;
  p.components = chain_components();
  p.mode = SyncMode::rendezvous;
  expect_matches_interpreter(p);
}

TEST(Explorer, MatchesInterpreterOnClimateSystem) {
  expect_matches_interpreter(system_program(load_system(kCorpus / "climate" / "climate.mrt")));
}

TEST(Explorer, MatchesInterpreterOnPaintSystem) {
  expect_matches_interpreter(system_program(load_system(kCorpus / "paint" / "paint_workshop.mrt")));
}

TEST(Explorer, PaintReachableMatchesDfs) {
  auto m = compose_system(load_system(kCorpus / "paint" / "paint_workshop.mrt"));
  EXPECT_EQ(oracle::dfs_reachable(m.lts()).size(), m.state_count());
}

TEST(Explorer, DomainOverflowNamesTheEdge) {
  auto c = parse("int[0..2] x = 0;\nproctype P() {\na:\n  do\n  :: x = x + 1;\n  od\n}\n");
  try {
    compile_to_lts(c);
    FAIL() << "expected a model error";
  } catch (const ModelError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("x = x + 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("P edge at inline.pml:5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("yields 3"), std::string::npos) << msg;
  }
}

TEST(Explorer, UrgentLocationBlocksTime) {
  auto c = parse(
      "TIMER_X t : 4;\nproctype U() {\na:\n  invariant false;\n  do\n  :: goto b;\n  od\nb:\n}\n");
  auto m = compile_to_lts(c);
  auto tick = m.lts().find_action("tick");
  ASSERT_TRUE(tick);
  for (const auto& t : m.lts().transitions())
    if (t.action == *tick) EXPECT_EQ(m.valuation(t.source).locations.at("U"), "b");
  EXPECT_EQ(m.state_count(), 1u + 5u);
}

TEST(Explorer, SeveralInitialValuesGetARoot) {
  auto c = parse("int[0..9] x = {2, 5, 7};\nproctype R() {\na:\n}\n");
  auto m = compile_to_lts(c);
  ASSERT_TRUE(m.has_root());
  EXPECT_EQ(m.lts().initial(), 0u);
  EXPECT_EQ(m.locations_of(0), "init");
  std::set<std::int32_t> xs;
  for (auto s : m.initial_states()) xs.insert(m.valuation(s).values.at("x"));
  EXPECT_EQ(xs, (std::set<std::int32_t>{2, 5, 7}));
  for (const auto& t : m.lts().outgoing(0)) EXPECT_TRUE(m.lts().action(t.action).internal());
}

TEST(Explorer, TickKeepsLocationsAndData) {
  auto m = compose_system(load_system(kCorpus / "climate" / "climate.mrt"));
  auto tick = m.lts().find_action("tick");
  ASSERT_TRUE(tick);
  const auto& layout = m.layout();
  std::size_t ticks = 0;
  for (const auto& t : m.lts().transitions()) {
    if (t.action != *tick) continue;
    ++ticks;
    auto a = m.valuation(t.source);
    auto b = m.valuation(t.target);
    EXPECT_EQ(a.locations, b.locations);
    for (const auto& slot : layout.vars) {
      auto x = a.values.at(slot.key), y = b.values.at(slot.key);
      if (slot.timer) EXPECT_EQ(y, std::min(x + 1, slot.domain.hi)) << slot.key;
      else EXPECT_EQ(x, y) << slot.key;
    }
  }
  EXPECT_GT(ticks, 0u);
}

TEST(Explorer, ValuesStayInDomains) {
  for (const auto& file : {kCorpus / "climate" / "climate.mrt", kCorpus / "paint" / "paint_workshop.mrt"}) {
    auto m = compose_system(load_system(file));
    for (StateId s = 0; s < m.state_count(); ++s) {
      if (m.is_root(s)) continue;
      auto v = m.valuation(s);
      for (const auto& slot : m.layout().vars) {
        auto x = v.values.at(slot.key);
        EXPECT_LE(slot.domain.lo, x) << slot.key;
        EXPECT_LE(x, slot.domain.hi) << slot.key;
      }
    }
  }
}

TEST(Explorer, WorkersGiveIdenticalResult) {
  auto c = parse(
      "int[0..99] a = 0;\nint[0..99] b = 0;\nproctype G() {\ns:\n  do\n  :: (a < 99) -> a = a + 1;\n"
      "  :: (b < 99) -> b = b + 1;\n  od\n}\n");
  ExploreOptions one;
  auto base = compile_to_lts(c, one);
  ASSERT_EQ(base.state_count(), 100u * 100u);
  for (unsigned w : {2u, 4u, 8u}) {
    ExploreOptions o;
    o.workers = w;
    auto m = compile_to_lts(c, o);
    EXPECT_EQ(m.lts().states(), base.lts().states()) << w;
    EXPECT_EQ(m.lts().transitions(), base.lts().transitions()) << w;
  }
}

TEST(Explorer, StateLimit) {
  auto c = parse("int[0..99] a = 0;\nproctype G() {\ns:\n  do\n  :: (a < 99) -> a = a + 1;\n  od\n}\n");
  ExploreOptions o;
  o.state_limit = 50;
  EXPECT_THROW(compile_to_lts(c, o), StateLimitError);
  o.state_limit = 100;
  EXPECT_EQ(compile_to_lts(c, o).state_count(), 100u);
}

TEST(Explorer, RendezvousFusesSendAndReceive) {
  auto m = compose_system(load_system(kCorpus / "climate" / "climate.mrt"));
  for (const auto& a : m.lts().alphabet()) {
    EXPECT_NE(a.name.back(), '!') << a.name;
    EXPECT_NE(a.name.back(), '?') << a.name;
  }
  auto pc = m.lts().find_action("power_c");
  ASSERT_TRUE(pc);
  std::size_t n = 0;
  for (const auto& t : m.lts().transitions()) {
    if (t.action != *pc) continue;
    ++n;
    auto a = m.valuation(t.source), b = m.valuation(t.target);
    EXPECT_EQ(a.locations.at("Power_manager"), "publish");
    EXPECT_EQ(b.locations.at("Power_manager"), "idle");
    EXPECT_EQ(a.locations.at("Climate_controller"), "config");
    EXPECT_EQ(b.locations.at("Climate_controller"), "start_working");
    EXPECT_EQ(a.locations.at("Airing"), b.locations.at("Airing"));
  }
  EXPECT_GT(n, 0u);
}

TEST(System, DanglingReceiveIsRejected) {
  auto dir = fs::temp_directory_path() / "gcon_dangling";
  fs::create_directories(dir);
  auto file = dir / "partial.mrt";
  auto cl = kCorpus / "climate";
  {
    std::ofstream out(file);
    out << "system Partial;\n"
        << "component \"" << (cl / "climate_controller.pml").string() << "\" contract \""
        << (cl / "climate_controller.ctr").string() << "\";\n"
        << "component \"" << (cl / "airing.pml").string() << "\" contract \"" << (cl / "airing.ctr").string()
        << "\";\n"
        << "channel power_c;\nchannel sleep;\nchannel continue_sleeping;\nchannel work_again;\n";
  }
  auto s = load_system(file);
  try {
    compose_system(s);
    FAIL() << "expected a composition error";
  } catch (const CompositionError& e) {
    EXPECT_NE(std::string(e.what()).find("channel 'power_c' has a receiver but no sender"), std::string::npos)
        << e.what();
  }
  fs::remove_all(dir);
}

TEST(System, UnknownMutantIsReported) {
  try {
    load_system(kCorpus / "climate" / "climate.mrt", std::string("nope"));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("heater-overflow"), std::string::npos);
  }
}

TEST(System, NaryMatchesPairwiseFold) {
  auto comps = chain_components();
  std::vector<StateSpace> parts;
  std::vector<Lts> lts;
  for (const auto& c : comps) {
    parts.push_back(compile_to_lts(c));
    lts.push_back(relabelled(parts.back()));
  }
  auto part_proj = [&](std::size_t i, StateId s) {
    auto id = parts[i].lts().find_state(lts[i].state_name(s));
    return project(parts[i], *id, comps[i].name);
  };

  auto ab = parallel_compose_with_origin(lts[0], lts[1], shared(lts[0], lts[1]));
  auto left = parallel_compose_with_origin(ab.lts, lts[2], shared(ab.lts, lts[2]));
  auto left_steps = triple_steps(left.lts, [&](StateId s) {
    auto [x, c] = left.origin[s];
    auto [a, b] = ab.origin[x];
    return Triple{part_proj(0, a), part_proj(1, b), part_proj(2, c)};
  });

  auto bc = parallel_compose_with_origin(lts[1], lts[2], shared(lts[1], lts[2]));
  auto right = parallel_compose_with_origin(lts[0], bc.lts, shared(lts[0], bc.lts));
  auto right_steps = triple_steps(right.lts, [&](StateId s) {
    auto [a, x] = right.origin[s];
    auto [b, c] = bc.origin[x];
    return Triple{part_proj(0, a), part_proj(1, b), part_proj(2, c)};
  });
  EXPECT_EQ(left_steps, right_steps);
  EXPECT_EQ(left.lts.state_count(), right.lts.state_count());

  Program p;
  p.components = comps;
  p.mode = SyncMode::rendezvous;
  auto m = explore(p);
  auto nary_steps = triple_steps(m.lts(), [&](StateId s) {
    return Triple{project(m, s, "A"), project(m, s, "B"), project(m, s, "C")};
  });
  EXPECT_EQ(nary_steps, left_steps);
  EXPECT_EQ(m.state_count(), left.lts.state_count());
}

TEST(Narrowing, PrunesTransitionsLeavingTheRange) {
  auto c = parse("int[0..9] x = 0;\nproctype N() {\na:\n  do\n  :: (x < 9) -> x = x + 1;\n  od\n}\n");
  EXPECT_EQ(compile_to_lts(c).state_count(), 10u);
  ExploreOptions o;
  o.narrow["x"] = {0, 3};
  auto m = compile_to_lts(c, o);
  EXPECT_EQ(m.state_count(), 4u);
  EXPECT_EQ(m.pruned_transitions(), 1u);
}

TEST(Narrowing, FiltersInitialChoices) {
  auto m = compose_system(load_system(kCorpus / "climate" / "climate.mrt"));
  ExploreOptions o;
  o.narrow["IS_temperature"] = {10, 10};
  auto n = compose_system(load_system(kCorpus / "climate" / "climate.mrt"), o);
  EXPECT_LT(n.state_count(), m.state_count());
  for (auto s : n.initial_states()) EXPECT_EQ(n.valuation(s).values.at("IS_temperature"), 10);
}

TEST(Narrowing, RejectsWideningAndUnknownNames) {
  auto c = parse("int[0..9] x = 0;\nproctype N() {\na:\n}\n");
  ExploreOptions wide;
  wide.narrow["x"] = {0, 12};
  try {
    compile_to_lts(c, wide);
    FAIL() << "expected a model error";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("does not narrow the declared domain [0..9]"), std::string::npos);
  }
  ExploreOptions unknown;
  unknown.narrow["y"] = {0, 1};
  EXPECT_THROW(compile_to_lts(c, unknown), ModelError);
}

TEST(Translate, MinimalComponent) {
  auto text = export_uppaal_like(parse("active proctype P() {\na:\n  do\n  :: goto b;\n  od\nb:\n}\n"));
  EXPECT_NE(text.find("process P()"), std::string::npos) << text;
  EXPECT_NE(text.find("init a;"), std::string::npos) << text;
  EXPECT_NE(text.find("a -> b"), std::string::npos) << text;
  EXPECT_EQ(text.find("chan "), std::string::npos) << text;
}

TEST(Translate, TimerBecomesClock) {
  auto text = export_uppaal_like(
      parse("TIMER_X t : 7;\nproctype C() {\na:\n  invariant t <= 5;\n  do\n  :: (t == 5) -> t = 0;\n  od\n}\n"));
  EXPECT_NE(text.find("clock t;  // discrete, saturates at 7"), std::string::npos) << text;
  EXPECT_NE(text.find("a { t <= 5 }"), std::string::npos) << text;
  EXPECT_NE(text.find("assign t = 0"), std::string::npos) << text;
}

TEST(Translate, ClimateControllerGolden) {
  auto text = export_uppaal_like(parse_component_file(kCorpus / "climate" / "climate_controller.pml"));
  auto golden = kGolden / "climate_controller.uppaal.txt";
  if (const char* u = std::getenv("GCON_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    fs::create_directories(kGolden);
    std::ofstream(golden, std::ios::binary) << text;
  }
  ASSERT_TRUE(fs::exists(golden)) << "run with GCON_UPDATE_GOLDEN=1 to create " << golden;
  EXPECT_EQ(text, read_text_file(golden));
}
