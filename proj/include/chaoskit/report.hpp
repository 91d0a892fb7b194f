#pragma once

// JSON and CSV serialization. Output is canonical: object keys sorted, every
// float rounded to 9 significant digits, LF line endings.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "chaoskit/classify.hpp"
#include "chaoskit/distfn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/rtchaos.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/systems.hpp"
#include "chaoskit/theorems.hpp"

namespace chaoskit {

using nlohmann::json;

inline double round_sig9(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

/// Rounds every float in place (recursively).
inline void round_floats(json& j) {
  if (j.is_number_float()) {
    j = round_sig9(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& el : j) round_floats(el);
  }
}

/// Canonical text: sorted keys (nlohmann's default object is ordered by key),
/// 9 significant digits, two-space indent, trailing newline.
inline std::string canonical_dump(json j) {
  round_floats(j);
  return j.dump(2) + "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ArgumentError("failed writing " + path);
}

// ---------------------------------------------------------------------------

inline json to_json(const SystemSpec& s) {
  json j{{"kind", std::string(to_string(s.kind))}, {"horizon_cap", s.horizon_cap}};
  if (s.kind == SystemKind::rotation) j["alpha"] = s.alpha;
  if (s.kind == SystemKind::iterate) {
    j["N"] = s.power;
    j["base"] = to_json(*s.base);
  }
  return j;
}

inline json to_json(const SequenceSpec& q) {
  json j{{"label", q.label()}};
  switch (q.kind) {
    case SequenceKind::arith:
      j["kind"] = "arith";
      j["step"] = q.step;
      j["start"] = q.start;
      break;
    case SequenceKind::explicit_list:
      j["kind"] = "explicit";
      j["indices"] = q.indices;
      break;
    case SequenceKind::witness:
      j["kind"] = "witness";
      j["indices"] = q.indices;
      j["run_ends"] = q.run_ends;
      break;
  }
  j["gap_bound"] = q.gap_bound ? json(*q.gap_bound) : json(nullptr);
  return j;
}

inline json to_json(const Thresholds& th) {
  return {{"zero_tol", th.zero_tol},         {"one_tol", th.one_tol},
          {"gap_tol", th.gap_tol},           {"j_min_width", th.j_min_width},
          {"proximal_tol", th.proximal_tol}, {"separation_tol", th.separation_tol},
          {"resolution", th.resolution},     {"grid_points", th.grid_points},
          {"burn_in", th.burn_in}};
}

inline json to_json(const Flag& f) {
  json j{{"set", f.set}};
  if (f.epsilon) j["epsilon"] = *f.epsilon;
  if (f.interval) j["J"] = {f.interval->first, f.interval->second};
  return j;
}

inline json to_json(const LiYorkeResult& r) {
  return {{"set", r.flag}, {"min_distance", r.min_distance}, {"max_distance", r.max_distance},
          {"tail_start", r.tail_start}};
}

inline json to_json(const SdcResult& r) {
  return {{"sequence", to_json(r.sequence)}, {"samples", r.samples}, {"truncated", r.truncated},
          {"sdc1", to_json(r.sdc1)},          {"sdc2", to_json(r.sdc2)}, {"sdc3", to_json(r.sdc3)}};
}

inline json to_json(const ChaosVerdict& v) {
  json j{{"horizon", v.horizon}, {"thresholds", to_json(v.thresholds)}};
  j["liyorke"] = v.liyorke ? to_json(*v.liyorke) : json(nullptr);
  if (v.dc) {
    j["dc1"] = to_json(v.dc->dc1);
    j["dc2"] = to_json(v.dc->dc2);
    j["dc2prime"] = to_json(v.dc->dc2prime);
    j["dc3"] = to_json(v.dc->dc3);
  }
  j["sdc"] = json::array();
  for (const auto& s : v.sdc) j["sdc"].push_back(to_json(s));
  j["consistency_violations"] = consistency_check(v);
  return j;
}

inline json to_json(const DistributionEstimate& e) {
  return {{"t", e.t_grid}, {"F_lower", e.lower}, {"F_upper", e.upper}, {"checkpoints", e.checkpoints},
          {"burn_in", e.burn_in}};
}

inline json to_json(const RTReport& r) {
  return {{"sensitivity_constant_estimate", r.sensitivity_constant_estimate},
          {"transitive", r.transitive},
          {"cells_visited", r.cells_visited},
          {"cells_total", r.cells_total},
          {"rt", r.rt},
          {"parameters",
           {{"base_points", r.params.base_points},
            {"radii", r.params.radii},
            {"sensitivity_horizon", r.params.sensitivity_horizon},
            {"samples_per_radius", r.params.samples_per_radius},
            {"grid_eps", r.params.grid_eps},
            {"transitivity_horizon", r.params.transitivity_horizon},
            {"start_samples", r.params.start_samples},
            {"seed", r.params.seed}}}};
}

/// Runtime is wall-clock and would break byte-identical output, so it is
/// only included on request.
inline json to_json(const HarnessReport& r, bool with_runtime = false) {
  json cases = json::array();
  for (const auto& c : r.cases) cases.push_back({{"id", c.id}, {"agree", c.agree}, {"data", c.data}});
  json j{{"harness", r.harness},   {"parameters", r.parameters}, {"cases", cases},
         {"counterexamples", r.counterexamples}, {"metrics", r.metrics}, {"vacuous", r.vacuous},
         {"passed", r.passed},     {"agreement_rate", r.agreement_rate()}};
  if (with_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// CSV

/// `t,F_lower,F_upper`, one row per grid point.
inline std::string estimate_csv(const DistributionEstimate& e) {
  std::string out = "t,F_lower,F_upper\n";
  char buf[96];
  for (std::size_t k = 0; k < e.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", e.t_grid[k], e.lower[k], e.upper[k]);
    out += buf;
  }
  return out;
}

/// `case_id,flag_f,flag_fN,agree` for a theorem2 report.
inline std::string theorem2_csv(const HarnessReport& r) {
  std::string out = "case_id,flag_f,flag_fN,agree\n";
  auto b = [](bool v) { return v ? "1" : "0"; };
  for (const auto& c : r.cases)
    out += c.id + "," + b(c.data.at("flag_f").get<bool>()) + "," + b(c.data.at("flag_fN").get<bool>()) + "," +
           b(c.agree) + "\n";
  return out;
}

}  // namespace chaoskit
