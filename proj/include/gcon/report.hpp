#pragma once

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"

#include "gcon/verifier.hpp"
#include "gcon/version.hpp"

namespace gcon {

using Json = nlohmann::ordered_json;

struct ReportOptions {
  bool timings = false;        // include per-property durations
  std::string timestamp;       // empty: current UTC time
};

inline std::string utc_timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

namespace detail {

inline Json witness_lines(const std::string& text) {
  Json lines = Json::array();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace detail

// Field order is fixed, and nothing but the timestamp (and durations, when
// asked for) depends on the run, so two runs on the same inputs produce
// identical text apart from that field.
inline Json report_to_json(const VerificationReport& r, const ReportOptions& opts = {}) {
  Json j;
  j["system"] = r.system;
  j["status"] = to_string(r.overall());
  if (r.error) j["error"] = *r.error;
  Json layers = Json::array();
  for (const auto& l : r.layers) {
    Json lj;
    lj["facet"] = l.layer.facet.name();
    lj["priority"] = l.layer.priority;
    Json vs = Json::array();
    for (const auto& p : l.results) {
      Json v;
      v["component"] = p.component;
      v["property"] = p.property.name;
      v["role"] = to_string(p.role);
      v["formula"] = render_formula(p.property);
      v["status"] = to_string(p.verdict.status);
      v["states_explored"] = p.verdict.states_explored;
      if (!p.verdict.message.empty()) v["message"] = p.verdict.message;
      v["witness"] = p.witness_text.empty() ? Json(nullptr) : detail::witness_lines(p.witness_text);
      if (opts.timings)
        v["duration_ms"] = std::chrono::duration<double, std::milli>(p.verdict.duration).count();
      vs.push_back(std::move(v));
    }
    lj["verdicts"] = std::move(vs);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  j["short_circuited_at"] = r.short_circuited_at ? Json(r.short_circuited_at->name()) : Json(nullptr);
  Json totals;
  for (const auto& [s, n] : r.totals()) totals[to_string(s)] = n;
  j["totals"] = std::move(totals);
  Json env;
  env["tool_version"] = kVersion;
  env["timestamp"] = opts.timestamp.empty() ? utc_timestamp() : opts.timestamp;
  Json ov = Json::object();
  for (const auto& [k, n] : r.overrides) ov[k] = std::to_string(n.lo) + ".." + std::to_string(n.hi);
  env["overrides"] = std::move(ov);
  env["mutant"] = r.mutant ? Json(*r.mutant) : Json(nullptr);
  env["states"] = r.states;
  env["pruned_transitions"] = r.pruned_transitions;
  j["environment"] = std::move(env);
  return j;
}

inline std::string report_to_text(const VerificationReport& r, const ReportOptions& opts = {}) {
  return report_to_json(r, opts).dump(2) + "\n";
}

// Layer summary table, e.g.
//   layer          prio  PASS  FAIL  ...
inline std::string summary_table(const Json& report) {
  std::ostringstream os;
  static const char* kCols[] = {"PASS", "FAIL", "ASSUMPTION_VIOLATED", "ERROR", "SKIPPED"};
  os << std::left << std::setw(16) << "layer" << std::right << std::setw(6) << "prio";
  for (const auto* c : kCols) os << std::setw(c == std::string("ASSUMPTION_VIOLATED") ? 21 : 9) << c;
  os << "\n";
  for (const auto& l : report.at("layers")) {
    std::map<std::string, int> counts;
    for (const auto& v : l.at("verdicts")) ++counts[v.at("status").get<std::string>()];
    os << std::left << std::setw(16) << l.at("facet").get<std::string>() << std::right << std::setw(6)
       << l.at("priority").get<int>();
    for (const auto* c : kCols) os << std::setw(c == std::string("ASSUMPTION_VIOLATED") ? 21 : 9) << counts[c];
    os << "\n";
  }
  for (const auto& l : report.at("layers"))
    for (const auto& v : l.at("verdicts")) {
      auto st = v.at("status").get<std::string>();
      if (st == "PASS" || st == "SKIPPED") continue;
      os << "\n" << st << " " << v.at("component").get<std::string>() << "." << v.at("property").get<std::string>()
         << ": " << v.at("formula").get<std::string>() << "\n";
      if (v.contains("message")) os << "  " << v.at("message").get<std::string>() << "\n";
      if (v.at("witness").is_array())
        for (const auto& line : v.at("witness")) os << "  " << line.get<std::string>() << "\n";
    }
  if (report.contains("error")) os << "\nERROR: " << report.at("error").get<std::string>() << "\n";
  if (!report.at("short_circuited_at").is_null())
    os << "\nstopped after layer '" << report.at("short_circuited_at").get<std::string>() << "'\n";
  os << "\nstatus: " << report.at("status").get<std::string>() << "\n";
  return os.str();
}

}  // namespace gcon
