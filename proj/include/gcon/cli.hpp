#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gcon/checker.hpp"
#include "gcon/contract.hpp"
#include "gcon/dsl_parser.hpp"
#include "gcon/report.hpp"
#include "gcon/system.hpp"
#include "gcon/translate.hpp"
#include "gcon/verifier.hpp"
#include "gcon/version.hpp"

namespace gcon::cli {

inline constexpr const char* kReportDirEnv = "GCON_REPORT_DIR";

// Exit codes: 0 success / all PASS, 1 verification found a problem or
// diagnostics were printed, 2 usage or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string report_path;
  std::string dot_path;
  std::vector<std::string> narrow;
  std::string mutant;
  std::string component;
  std::size_t state_limit = kDefaultStateLimit;
  unsigned workers = 1;
  bool no_short_circuit = false;
  bool timings = false;
};

inline std::map<std::string, Narrowing> parse_narrowings(const std::vector<std::string>& specs) {
  std::map<std::string, Narrowing> out;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    auto dots = s.find("..", eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || dots == std::string::npos || eq == 0)
      throw Error("bad --narrow '" + s + "', expected var=lo..hi");
    Narrowing n;
    try {
      std::size_t used = 0;
      auto lo = s.substr(eq + 1, dots - eq - 1);
      auto hi = s.substr(dots + 2);
      n.lo = std::stoi(lo, &used);
      if (used != lo.size()) throw std::invalid_argument(lo);
      n.hi = std::stoi(hi, &used);
      if (used != hi.size()) throw std::invalid_argument(hi);
    } catch (const std::logic_error&) {
      throw Error("bad --narrow '" + s + "', expected var=lo..hi");
    }
    out[s.substr(0, eq)] = n;
  }
  return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

inline void print_diagnostics(std::ostream& err, const std::exception& e) {
  if (const auto* r = dynamic_cast<const ResolveError*>(&e)) {
    for (const auto& p : r->problems()) err << p << "\n";
  } else if (const auto* l = dynamic_cast<const LoadError*>(&e)) {
    for (const auto& p : l->problems()) err << p << "\n";
  } else {
    err << e.what() << "\n";
  }
}

inline int cmd_parse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int rc = kExitOk;
  for (const auto& in : cfg.inputs) {
    std::filesystem::path p(in);
    try {
      if (!std::filesystem::exists(p)) throw Error("no such file: '" + in + "'");
      const auto ext = p.extension().string();
      if (ext == ".mrt") {
        auto s = load_system(p);
        check_composable(s);
        out << in << ": ok (" << s.components.size() << " components)\n";
      } else if (ext == ".ctr") {
        auto k = parse_contract_file(p);
        out << in << ": ok (" << k.property_count() << " properties)\n";
      } else {
        auto c = parse_component_file(p);
        out << in << ": ok (" << c.locations.size() << " locations, " << c.edges.size() << " edges)\n";
      }
    } catch (const std::exception& e) {
      print_diagnostics(err, e);
      rc = kExitFailed;
    }
  }
  return rc;
}

inline ExploreOptions explore_options(const RunConfig& cfg) {
  ExploreOptions o;
  o.state_limit = cfg.state_limit;
  o.workers = cfg.workers;
  o.narrow = parse_narrowings(cfg.narrow);
  return o;
}

inline std::optional<std::string> mutant_of(const RunConfig& cfg) {
  if (cfg.mutant.empty()) return std::nullopt;
  return cfg.mutant;
}

inline int cmd_compose(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  auto s = load_system(cfg.inputs.at(0), mutant_of(cfg));
  auto space = compose_system(s, explore_options(cfg));
  out << s.name << ": " << space.state_count() << " states, " << space.lts().transitions().size()
      << " transitions";
  if (space.pruned_transitions()) out << ", " << space.pruned_transitions() << " transitions pruned by narrowing";
  out << "\n";
  if (!cfg.dot_path.empty()) write_file(cfg.dot_path, to_dot(space.lts(), s.name));
  return kExitOk;
}

inline std::filesystem::path report_destination(const RunConfig& cfg, const std::string& system) {
  if (!cfg.report_path.empty()) return cfg.report_path;
  if (const char* dir = std::getenv(kReportDirEnv); dir && *dir) return std::filesystem::path(dir) / (system + ".json");
  return {};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  auto s = load_system(cfg.inputs.at(0), mutant_of(cfg));
  VerifyOptions vo;
  vo.short_circuit = !cfg.no_short_circuit;
  vo.explore = explore_options(cfg);
  VerificationReport rep;
  if (!cfg.component.empty()) {
    const WellStructuredComponent* w = nullptr;
    for (const auto& c : s.components)
      if (c.behaviour.name == cfg.component) w = &c;
    if (!w) throw Error("system '" + s.name + "' has no component '" + cfg.component + "'");
    rep = verify_component(*w, vo).report;
  } else {
    rep = verify_system(s, vo);
  }
  ReportOptions ro;
  ro.timings = cfg.timings;
  auto json = report_to_json(rep, ro);
  out << summary_table(json);
  if (auto dest = report_destination(cfg, rep.system); !dest.empty()) {
    write_file(dest, json.dump(2) + "\n");
    out << "report: " << dest.string() << "\n";
  }
  if (!cfg.dot_path.empty() && cfg.component.empty() && !rep.error)
    write_file(cfg.dot_path, to_dot(compose_system(s, vo.explore).lts(), s.name));
  return rep.exit_code();
}

inline int cmd_translate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::filesystem::path p(cfg.inputs.at(0));
  if (!std::filesystem::exists(p)) throw Error("no such file: '" + p.string() + "'");
  auto text = export_uppaal_like(parse_component_file(p));
  if (cfg.output.empty()) out << text;
  else write_file(cfg.output, text);
  if (!cfg.dot_path.empty()) write_file(cfg.dot_path, to_dot(compile_to_lts(parse_component_file(p)).lts(), p.stem().string()));
  return kExitOk;
}

inline int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::filesystem::path p(cfg.inputs.at(0));
  if (!std::filesystem::exists(p)) throw Error("no such file: '" + p.string() + "'");
  Json j;
  try {
    j = Json::parse(read_text_file(p));
    out << summary_table(j);
    return j.at("status").get<std::string>() == "PASS" ? kExitOk : kExitFailed;
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + p.string() + "' is not a verification report: " + e.what());
  }
}

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layered contract verification for component models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto* parse = app.add_subcommand("parse", "Parse component, contract and system files and report diagnostics");
  parse->add_option("paths", cfg.inputs, "Files to parse (.pml, .ctr, .mrt)")->required();

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--state-limit", cfg.state_limit, "Stop after this many states");
    sub->add_option("--narrow", cfg.narrow, "Restrict a variable to lo..hi (var=lo..hi)");
    sub->add_option("--workers", cfg.workers, "Exploration worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--mutate", cfg.mutant, "Replace a component by a named mutant of the system file");
    sub->add_option("--dot", cfg.dot_path, "Write the explored state graph as DOT");
  };

  auto* compose = app.add_subcommand("compose", "Compose a system and print its size");
  compose->add_option("system", cfg.inputs, "System file (.mrt)")->required()->expected(1);
  add_model_flags(compose);

  auto* verify = app.add_subcommand("verify", "Verify a system layer by layer");
  verify->add_option("system", cfg.inputs, "System file (.mrt)")->required()->expected(1);
  add_model_flags(verify);
  verify->add_flag("--no-short-circuit", cfg.no_short_circuit, "Check every layer even after a failure");
  verify->add_option("--report", cfg.report_path, "Write the JSON report here");
  verify->add_option("--component", cfg.component, "Verify one component in isolation");
  verify->add_flag("--timings", cfg.timings, "Include per-property durations in the report");

  auto* translate = app.add_subcommand("translate", "Print the automaton form of a component");
  translate->add_option("component", cfg.inputs, "Component file (.pml)")->required()->expected(1);
  translate->add_option("-o,--output", cfg.output, "Write to a file instead of stdout");
  translate->add_option("--dot", cfg.dot_path, "Write the component's state graph as DOT");

  auto* report = app.add_subcommand("report", "Print the summary of a saved report");
  report->add_option("report", cfg.inputs, "Report file (.json)")->required()->expected(1);

  std::vector<std::string> argv_store{"gcon"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(cfg, out, err);
    if (compose->parsed()) return cmd_compose(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (translate->parsed()) return cmd_translate(cfg, out, err);
    if (report->parsed()) return cmd_report(cfg, out, err);
  } catch (const ParseError& e) {
    print_diagnostics(err, e);
    return kExitFailed;
  } catch (const ResolveError& e) {
    print_diagnostics(err, e);
    return kExitFailed;
  } catch (const LoadError& e) {
    print_diagnostics(err, e);
    return kExitFailed;
  } catch (const CompositionError& e) {
    print_diagnostics(err, e);
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gcon::cli
