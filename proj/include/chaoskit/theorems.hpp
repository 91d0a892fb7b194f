#pragma once

// Empirical harnesses: bounded-gap DC <=> SDC agreement, DC2' invariance under
// iteration, F = 0 transfer between f and f^N, the unbounded-gap contrapositive,
// the implication lattice, and the example1 block construction.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "chaoskit/classify.hpp"
#include "chaoskit/distfn.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/rtchaos.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/systems.hpp"

namespace chaoskit {

struct PointPair {
  std::string id;
  Point x;
  Point y;
};

struct HarnessCase {
  std::string id;
  bool agree = true;
  nlohmann::json data;
};

struct HarnessReport {
  std::string harness;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<HarnessCase> cases;
  std::vector<nlohmann::json> counterexamples;   // full reproduction parameters
  nlohmann::json metrics = nlohmann::json::object();
  bool vacuous = false;
  bool passed = false;
  double runtime_seconds = 0.0;

  double agreement_rate() const {
    if (cases.empty()) return 1.0;
    const auto n = std::count_if(cases.begin(), cases.end(), [](const HarnessCase& c) { return c.agree; });
    return static_cast<double>(n) / static_cast<double>(cases.size());
  }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline nlohmann::json flag_json(const Flag& f) {
  nlohmann::json j{{"set", f.set}};
  if (f.epsilon) j["epsilon"] = *f.epsilon;
  if (f.interval) j["J"] = {f.interval->first, f.interval->second};
  return j;
}

/// #{ i < n : values[i] < t } for each requested n (sorted ascending).
inline std::vector<std::uint64_t> counts_below(const std::vector<double>& values, double t,
                                               const std::vector<std::uint64_t>& ns) {
  std::vector<std::uint64_t> out;
  out.reserve(ns.size());
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (auto n : ns) {
    const std::size_t lim = std::min<std::size_t>(n, values.size());
    for (; i < lim; ++i)
      if (values[i] < t) ++c;
    out.push_back(c);
  }
  return out;
}

inline System iterate_system(const System& f, std::uint64_t n) {
  return System(SystemSpec::iterate(f.spec(), n));
}

}  // namespace detail

/// Concatenates sub-runs of one harness; passes iff every part passes.
inline HarnessReport merge_reports(const std::string& harness, const std::vector<HarnessReport>& parts) {
  HarnessReport out;
  out.harness = harness;
  out.parameters = nlohmann::json::array();
  out.metrics = nlohmann::json::array();
  out.passed = !parts.empty();
  out.vacuous = !parts.empty();
  for (const auto& p : parts) {
    out.parameters.push_back(p.parameters);
    out.metrics.push_back(p.metrics);
    out.cases.insert(out.cases.end(), p.cases.begin(), p.cases.end());
    out.counterexamples.insert(out.counterexamples.end(), p.counterexamples.begin(), p.counterexamples.end());
    out.passed = out.passed && p.passed;
    out.vacuous = out.vacuous && p.vacuous;
    out.runtime_seconds += p.runtime_seconds;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Theorem1Options {
  double min_agreement = 0.95;
  bool allow_noncompact = false;   // required to run on example1
};

/// For each pair: the DC1 surrogate unrestricted against the SDC1 surrogate
/// along q, plus the subset-count inequality
///   #{ i < floor(n/M) : d(q_i) < t } <= #{ i < n : d(i) < t }
/// (and its >= t counterpart) at every checkpoint n and grid scale t.
inline HarnessReport theorem1_harness(const System& system, const std::vector<PointPair>& pairs, const SequenceSpec& q,
                                      std::size_t horizon, const Thresholds& th, const Theorem1Options& opt = {}) {
  detail::Stopwatch clock;
  if (!q.gap_bound) throw ArgumentError("theorem1_harness: sequence must carry a gap bound M");
  if (system.root().spec().kind == SystemKind::example1 && !opt.allow_noncompact)
    throw ArgumentError("theorem1_harness: example1 is not compact; pass allow_noncompact to override");
  const std::uint64_t M = *q.gap_bound;
  const auto materialized = q.materialize(horizon);
  for (std::size_t i = 1; i < materialized.size(); ++i)
    if (materialized[i] - materialized[i - 1] > M)
      throw ArgumentError("theorem1_harness: materialized gap exceeds M at i = " + std::to_string(i));

  HarnessReport rep;
  rep.harness = "theorem1";
  rep.parameters = {{"system", system.name()}, {"sequence", q.label()}, {"M", M}, {"horizon", horizon},
                    {"pairs", pairs.size()}, {"min_agreement", opt.min_agreement}};
  rep.cases.resize(pairs.size());
  std::vector<std::uint64_t> violations(pairs.size(), 0), checks(pairs.size(), 0);

  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto& pr = pairs[k];
    const auto profile = distance_profile(system, pr.x, pr.y, horizon);
    const auto est = estimate_for(profile, th);
    const auto dc = dc_verdict(est, th);
    const auto sdc = sdc_from_profile(profile, q, th);
    const auto sub = subsample_profile(profile, q);

    std::vector<std::uint64_t> ms;
    for (auto n : est.checkpoints) ms.push_back(n / M);
    std::uint64_t bad = 0, total = 0;
    for (double t : est.t_grid) {
      const auto full = detail::counts_below(profile.values, t, est.checkpoints);
      const auto part = detail::counts_below(sub.values, t, ms);
      for (std::size_t c = 0; c < ms.size(); ++c) {
        const std::uint64_t m = std::min<std::uint64_t>(ms[c], sub.size());
        const std::uint64_t n = est.checkpoints[c];
        total += 2;
        if (part[c] > full[c]) ++bad;                // part (i): d < t
        if (m - part[c] > n - full[c]) ++bad;        // part (ii): d >= t
      }
    }
    violations[k] = bad;
    checks[k] = total;
    auto& hc = rep.cases[k];
    hc.id = pr.id;
    hc.agree = dc.dc1.set == sdc.sdc1.set;
    hc.data = {{"dc1", detail::flag_json(dc.dc1)}, {"sdc1", detail::flag_json(sdc.sdc1)},
               {"counting_checks", total}, {"counting_violations", bad}};
  });

  std::uint64_t bad = 0, total = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    bad += violations[k];
    total += checks[k];
    if (!rep.cases[k].agree || violations[k] > 0)
      rep.counterexamples.push_back({{"case", pairs[k].id}, {"system", system.name()}, {"sequence", q.label()},
                                     {"horizon", horizon}, {"counting_violations", violations[k]}});
  }
  rep.metrics = {{"agreement_rate", rep.agreement_rate()}, {"counting_checks", total}, {"counting_violations", bad}};
  rep.passed = rep.agreement_rate() >= opt.min_agreement && bad == 0;
  rep.runtime_seconds = clock.seconds();
  return rep;
}

/// If the pair is SDC along q but not DC, q must have unbounded gaps. At a
/// finite prefix the gaps count as unbounded-looking when the largest gap
/// appears only after the first quarter of the prefix, or is at least eight
/// times the median gap.
inline HarnessReport remark3_check(const System& system, const PointPair& pair, const SequenceSpec& q,
                                   std::size_t horizon, const Thresholds& th) {
  detail::Stopwatch clock;
  HarnessReport rep;
  rep.harness = "remark3";
  rep.parameters = {{"system", system.name()}, {"sequence", q.label()}, {"horizon", horizon}, {"pair", pair.id}};
  const auto profile = distance_profile(system, pair.x, pair.y, horizon);
  const auto dc = dc_verdict(estimate_for(profile, th), th);
  const auto sdc = sdc_from_profile(profile, q, th);

  const auto terms = q.materialize(horizon);
  std::vector<std::uint64_t> gaps;
  for (std::size_t i = 1; i < terms.size(); ++i) gaps.push_back(terms[i] - terms[i - 1]);
  std::uint64_t max_gap = 0, quarter_max = 0, median = 0;
  if (!gaps.empty()) {
    max_gap = *std::max_element(gaps.begin(), gaps.end());
    const std::size_t quarter = std::max<std::size_t>(1, gaps.size() / 4);
    quarter_max = *std::max_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(quarter));
    auto sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    median = sorted[sorted.size() / 2];
  }
  const bool unbounded_looking = max_gap > quarter_max || max_gap >= 8 * median;

  HarnessCase hc;
  hc.id = pair.id;
  hc.data = {{"dc1", detail::flag_json(dc.dc1)}, {"sdc1", detail::flag_json(sdc.sdc1)}, {"max_gap", max_gap},
             {"first_quarter_max_gap", quarter_max}, {"median_gap", median},
             {"unbounded_looking", unbounded_looking}};
  rep.vacuous = !(sdc.sdc1.set && !dc.dc1.set);
  hc.agree = rep.vacuous || unbounded_looking;
  hc.data["vacuous"] = rep.vacuous;
  rep.cases.push_back(hc);
  if (!hc.agree) rep.counterexamples.push_back({{"case", pair.id}, {"sequence", q.label()}, {"horizon", horizon}});
  rep.metrics = {{"max_gap", max_gap}};
  rep.passed = hc.agree;
  rep.runtime_seconds = clock.seconds();
  return rep;
}

/// DC2' for f at horizon N*m against DC2' for f^N at horizon m.
inline HarnessReport theorem2_harness(const System& system, const std::vector<PointPair>& pairs, std::uint64_t N,
                                      std::size_t m, const Thresholds& th) {
  detail::Stopwatch clock;
  if (N < 1) throw ArgumentError("theorem2_harness: N must be >= 1");
  if (N * m > system.horizon_cap()) throw HorizonExceeded("theorem2_harness: N * horizon exceeds horizon_cap");
  const System fN = detail::iterate_system(system, N);
  HarnessReport rep;
  rep.harness = "theorem2";
  rep.parameters = {{"system", system.name()}, {"N", N}, {"horizon_fN", m}, {"horizon_f", N * m},
                    {"pairs", pairs.size()}};
  rep.cases.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto& pr = pairs[k];
    const auto vf = dc_verdict(estimate_for(distance_profile(system, pr.x, pr.y, N * m), th), th);
    const auto vn = dc_verdict(estimate_for(distance_profile(fN, pr.x, pr.y, m), th), th);
    auto& hc = rep.cases[k];
    hc.id = pr.id + "/N=" + std::to_string(N);
    hc.agree = vf.dc2prime.set == vn.dc2prime.set;
    hc.data = {{"flag_f", vf.dc2prime.set}, {"flag_fN", vn.dc2prime.set}, {"dc2prime_f", detail::flag_json(vf.dc2prime)},
               {"dc2prime_fN", detail::flag_json(vn.dc2prime)}};
  });
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (!rep.cases[k].agree)
      rep.counterexamples.push_back(
          {{"case", pairs[k].id}, {"system", system.name()}, {"N", N}, {"horizon_fN", m}});
  rep.metrics = {{"agreement_rate", rep.agreement_rate()}};
  rep.passed = rep.counterexamples.empty();
  rep.runtime_seconds = clock.seconds();
  return rep;
}

/// Lower estimate at scale t for f (horizon N*m) and f^N (horizon m); the
/// "lower ~ 0" predicate must agree in both directions.
inline HarnessReport lemma3_harness(const System& system, const PointPair& pair, double t, std::uint64_t N,
                                    std::size_t m, const Thresholds& th) {
  detail::Stopwatch clock;
  if (N < 1) throw ArgumentError("lemma3_harness: N must be >= 1");
  if (N * m > system.horizon_cap()) throw HorizonExceeded("lemma3_harness: N * horizon exceeds horizon_cap");
  const System fN = detail::iterate_system(system, N);
  const auto pf = distance_profile(system, pair.x, pair.y, N * m);
  const auto pn = distance_profile(fN, pair.x, pair.y, m);
  const auto ef = distribution_estimate(pf, {t}, default_checkpoints(pf, th.burn_in), th.burn_in);
  const auto en = distribution_estimate(pn, {t}, default_checkpoints(pn, th.burn_in), th.burn_in);
  const bool zf = ef.lower[0] <= th.zero_tol;
  const bool zn = en.lower[0] <= th.zero_tol;

  HarnessReport rep;
  rep.harness = "lemma3";
  rep.parameters = {{"system", system.name()}, {"pair", pair.id}, {"t", t}, {"N", N}, {"horizon_fN", m},
                    {"horizon_f", N * m}};
  HarnessCase hc;
  hc.id = pair.id;
  hc.agree = zf == zn;
  hc.data = {{"lower_f", ef.lower[0]},           {"lower_fN", en.lower[0]},
             {"zero_f", zf},                     {"zero_fN", zn},
             {"part_i_holds", !zf || zn},        {"part_ii_holds", !zn || zf}};
  rep.cases.push_back(hc);
  if (!hc.agree)
    rep.counterexamples.push_back({{"case", pair.id}, {"t", t}, {"N", N}, {"horizon_fN", m}});
  rep.passed = hc.agree;
  rep.runtime_seconds = clock.seconds();
  return rep;
}

/// Consistency of every pair verdict with the implication lattice.
inline HarnessReport lattice_harness(const System& system, const std::vector<PointPair>& pairs, std::size_t horizon,
                                     const Thresholds& th, const std::vector<SequenceSpec>& sequences = {}) {
  detail::Stopwatch clock;
  HarnessReport rep;
  rep.harness = "lattice";
  rep.parameters = {{"system", system.name()}, {"horizon", horizon}, {"pairs", pairs.size()}};
  rep.cases.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto v = classify_pair(system, pairs[k].x, pairs[k].y, horizon, th, sequences);
    const auto violations = consistency_check(v);
    auto& hc = rep.cases[k];
    hc.id = pairs[k].id;
    hc.agree = violations.empty();
    hc.data = {{"violations", violations},
               {"liyorke", v.liyorke->flag},
               {"dc1", v.dc->dc1.set},
               {"dc2", v.dc->dc2.set},
               {"dc2prime", v.dc->dc2prime.set},
               {"dc3", v.dc->dc3.set},
               {"sdc1", v.any_sdc1()}};
  });
  std::size_t total = 0;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& c : rep.cases) {
    for (const auto& key : {"liyorke", "dc1", "dc2", "dc2prime", "dc3", "sdc1"})
      counts[key] = counts.value(key, 0) + (c.data[key].get<bool>() ? 1 : 0);
    total += c.data["violations"].size();
    if (!c.agree) rep.counterexamples.push_back({{"case", c.id}, {"system", system.name()}, {"horizon", horizon},
                                                  {"violations", c.data["violations"]}});
  }
  rep.metrics = {{"violations", total}, {"flag_counts", counts}};
  rep.passed = total == 0;
  rep.runtime_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// example1

struct Example1Options {
  double upper_t = 0.3;            // any t in (1/4, 1/2)
  double upper_tolerance = 0.01;   // 1/2 - upper must lie in [0, tolerance]
};

/// Reproduces the block-space example for each seed pair (offset 0):
///  (A) distance 1 at every odd index,
///  (B) upper density at t in (1/4, 1/2) approaching 1/2 from below,
///  (C) density 0 at t = 1/2 and n = L_4, within the bound (L_3 + 1) / L_4,
///  (D) DC2' set and DC1 clear.
inline HarnessReport example1_reproduction(std::size_t horizon, const std::vector<std::pair<double, double>>& seeds,
                                           const Example1Options& opt = {}) {
  detail::Stopwatch clock;
  const auto table = example1_blocks(std::max<std::size_t>(horizon, 1));
  if (table.L.size() <= 4 || horizon < table.L[4])
    throw ArgumentError("example1_reproduction: horizon must be at least L_4 = 2059");
  const System system(SystemSpec::simple(SystemKind::example1, horizon));
  const Thresholds th = Thresholds::for_system(system);
  const std::uint64_t L3 = table.L[3], L4 = table.L[4];

  HarnessReport rep;
  rep.harness = "example1";
  rep.parameters = {{"horizon", horizon}, {"pairs", seeds.size()}, {"upper_t", opt.upper_t},
                    {"upper_tolerance", opt.upper_tolerance}, {"L", table.L}, {"b", table.b}};
  rep.cases.resize(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) {
    const auto [s, s2] = seeds[k];
    const Point x = system.from_coordinate(s), y = system.from_coordinate(s2);
    const auto profile = distance_profile(system, x, y, horizon);

    bool parity = true;
    for (std::size_t i = 1; i < profile.size(); i += 2) parity = parity && profile.values[i] == 1.0;

    auto cps = merge_checkpoints(checkpoint_schedule(horizon, 0, Geometric{1.25}), {L3, L4});
    const auto est = distribution_estimate(profile, {opt.upper_t}, cps);
    const double upper = est.upper[0];
    // Densities at checkpoints past L_4 must increase toward 1/2.
    bool monotone = true;
    double prev = -1.0;
    for (auto n : cps) {
      if (n <= L4) continue;
      const double d = empirical_density(profile, opt.upper_t, n);
      monotone = monotone && d > prev && d < 0.5;
      prev = d;
    }
    const double at_L4 = empirical_density(profile, 0.5, L4);
    const double bound = static_cast<double>(L3 + 1) / static_cast<double>(L4);
    const auto v = classify_profile(profile, th);
    const auto violations = consistency_check(v);

    const bool a = parity;
    const bool b = upper <= 0.5 && 0.5 - upper <= opt.upper_tolerance && monotone;
    const bool c = at_L4 == 0.0 && at_L4 <= bound;
    const bool d = v.dc->dc2prime.set && !v.dc->dc1.set;
    auto& hc = rep.cases[k];
    hc.id = "seeds(" + std::to_string(s) + "," + std::to_string(s2) + ")";
    hc.agree = a && b && c && d && violations.empty();
    hc.data = {{"A_parity_law", a},
               {"B_upper_density", upper},
               {"B_delta_to_half", 0.5 - upper},
               {"B_monotone_past_L4", monotone},
               {"B_pass", b},
               {"C_density_at_L4", at_L4},
               {"C_bound", bound},
               {"C_pass", c},
               {"D_dc2prime", v.dc->dc2prime.set},
               {"D_dc1", v.dc->dc1.set},
               {"D_pass", d},
               {"lattice_violations", violations}};
  });
  for (std::size_t k = 0; k < seeds.size(); ++k)
    if (!rep.cases[k].agree)
      rep.counterexamples.push_back({{"case", rep.cases[k].id}, {"horizon", horizon}, {"detail", rep.cases[k].data}});
  rep.metrics = {{"agreement_rate", rep.agreement_rate()}};
  rep.passed = !seeds.empty() && rep.counterexamples.empty();
  rep.runtime_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Ruelle-Takens indicators on the three reference systems

inline HarnessReport rt_harness(const RTParams& params, std::uint64_t horizon_cap = 100'000) {
  detail::Stopwatch clock;
  HarnessReport rep;
  rep.harness = "rt";
  rep.parameters = {{"grid_eps", params.grid_eps}, {"transitivity_horizon", params.transitivity_horizon},
                    {"sensitivity_horizon", params.sensitivity_horizon}, {"seed", params.seed}};
  struct Expect {
    SystemKind kind;
    bool sensitive, transitive;
  };
  const std::vector<Expect> expect{{SystemKind::tent, true, true},
                                   {SystemKind::rotation, false, true},
                                   {SystemKind::identity, false, false}};
  const std::uint64_t cap = std::max<std::uint64_t>(horizon_cap, params.transitivity_horizon);
  for (const auto& e : expect) {
    const System sys(SystemSpec::simple(e.kind, cap));
    const auto r = rt_verdict(sys, params);
    HarnessCase hc;
    hc.id = sys.name();
    const bool sens_ok = e.sensitive ? r.sensitivity_constant_estimate >= 0.1 : r.sensitivity_constant_estimate == 0.0;
    const bool trans_ok = r.transitive == e.transitive;
    hc.agree = sens_ok && trans_ok;
    hc.data = {{"sensitivity", r.sensitivity_constant_estimate}, {"transitive", r.transitive},
               {"cells_visited", r.cells_visited}, {"cells_total", r.cells_total}, {"rt", r.rt},
               {"expected_sensitive", e.sensitive}, {"expected_transitive", e.transitive}};
    if (!hc.agree) rep.counterexamples.push_back({{"case", hc.id}, {"detail", hc.data}});
    rep.cases.push_back(std::move(hc));
  }
  rep.passed = rep.counterexamples.empty();
  rep.runtime_seconds = clock.seconds();
  return rep;
}

}  // namespace chaoskit
