// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Reference values come from the loops in oracles.hpp.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chaoskit/chaoskit.hpp"
#include "oracles.hpp"

using namespace chaoskit;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr std::uint64_t kMillion = 1'000'000;

DistanceProfile ex1_profile(double a, double b, std::uint64_t horizon) {
  const System sys(SystemSpec::simple(SystemKind::example1, horizon));
  return distance_profile(sys, sys.from_coordinate(a), sys.from_coordinate(b), horizon);
}

Outcome upper_density() {
  const auto prof = ex1_profile(0.25, 0.75, kMillion);
  const auto cps = default_checkpoints(prof);
  const auto est = distribution_estimate(prof, {0.3}, cps);

  // Even indices in [L_4, n) are the only ones below 0.3 on the first 10^6 iterates.
  const auto L = oracle::block_ends(kMillion);
  double expect = 0.0;
  for (auto n : cps) {
    const std::uint64_t evens = n > L[4] ? (n - L[4]) / 2 : 0;
    expect = std::max(expect, static_cast<double>(evens) / static_cast<double>(n));
  }
  const double got = est.upper[0];
  const bool ok = got >= 0.49 && got <= 0.50 && std::fabs(got - expect) < 1e-12;
  return {ok, "upper " + fmt("%.6f", got) + ", oracle " + fmt("%.6f", expect)};
}

Outcome lower_density() {
  const auto L = oracle::block_ends(kMillion);
  const double bound = static_cast<double>(L[3] + 1) / static_cast<double>(L[4]);
  bool ok = true;
  double worst = 0.0, first = -1.0;
  for (const auto& [a, b] : example1_seed_pairs(10, 3)) {
    const auto prof = ex1_profile(a, b, kMillion);
    const double got = empirical_density(prof, 0.5, L[4]);
    const auto ref = oracle::example1_profile(a, b, L[4]);
    const double expect = static_cast<double>(oracle::count_below(ref, 0.5, L[4])) / static_cast<double>(L[4]);
    if (first < 0) first = got;
    worst = std::max(worst, got);
    ok = ok && got == expect && got <= bound;
  }
  ok = ok && first == 0.0;
  return {ok, "density at L_4 " + fmt("%g", first) + ", worst " + fmt("%g", worst) + ", bound " + fmt("%.6f", bound)};
}

Outcome parity_law() {
  std::size_t bad = 0, checked = 0;
  for (const auto& [a, b] : example1_seed_pairs(11, 17)) {
    if (a == 0.25 && b == 0.75) continue;
    const auto prof = ex1_profile(a, b, kMillion);
    for (std::uint64_t i = 1; i < kMillion; i += 2) {
      ++checked;
      if (prof.values[i] != 1.0 || oracle::example1_distance(a, i, b, i, kMillion) != 1.0) ++bad;
    }
  }
  return {bad == 0 && checked == 10 * (kMillion / 2),
          std::to_string(checked) + " odd indices, " + std::to_string(bad) + " mismatches"};
}

Outcome example1_verdict() {
  const System sys(SystemSpec::simple(SystemKind::example1, kMillion));
  const auto v = classify_pair(sys, sys.from_coordinate(0.25), sys.from_coordinate(0.75), kMillion,
                               Thresholds::for_system(sys));
  const bool ok = v.dc->dc2prime.set && !v.dc->dc1.set;
  return {ok, std::string("dc2prime ") + (v.dc->dc2prime.set ? "set" : "clear") + ", dc1 " +
                  (v.dc->dc1.set ? "set" : "clear")};
}

// Implication lattice re-derived from the raw flags.
std::size_t lattice_violations(const ChaosVerdict& v) {
  const bool ly = v.liyorke->flag;
  const auto& d = *v.dc;
  std::size_t n = 0;
  n += d.dc1.set && !(d.dc2.set && d.dc2prime.set && v.any_sdc1());
  n += (d.dc2.set || d.dc2prime.set) && !d.dc3.set;
  n += (d.dc1.set || d.dc2.set || d.dc2prime.set || v.any_sdc1()) && !ly;
  for (const auto& s : v.sdc) n += (s.sdc1.set && !s.sdc2.set) + (s.sdc2.set && !s.sdc3.set);
  return n;
}

Outcome lattice() {
  const std::uint64_t H = 100'000;
  std::string detail;
  bool ok = true;
  for (auto kind : {SystemKind::tent, SystemKind::logistic4, SystemKind::rotation, SystemKind::identity,
                    SystemKind::example1, SystemKind::shift2}) {
    const System sys(SystemSpec::simple(kind, H));
    std::vector<PointPair> pairs;
    if (kind == SystemKind::example1) {
      pairs = example1_pairs(100, 5, H);
    } else if (kind == SystemKind::shift2) {
      pairs = family_pairs(15, H);
      const auto extra = sampled_pairs(sys, 20, 5);
      pairs.insert(pairs.end(), extra.begin(), extra.end());
    } else {
      pairs = sampled_pairs(sys, 100, 5);
    }
    const auto th = Thresholds::for_system(sys);
    std::vector<std::size_t> lib(pairs.size()), ref(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
      const auto v = classify_pair(sys, pairs[k].x, pairs[k].y, H, th, {SequenceSpec::arith(2)});
      lib[k] = consistency_check(v).size();
      ref[k] = lattice_violations(v);
    });
    std::size_t viol = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) viol += lib[k] + ref[k];
    ok = ok && pairs.size() >= 100 && viol == 0;
    detail += std::string(to_string(kind)) + " " + std::to_string(pairs.size()) + "/" + std::to_string(viol) + " ";
  }
  detail.pop_back();
  return {ok, "pairs/violations: " + detail};
}

Outcome theorem2() {
  const std::uint64_t H = 100'000;
  const System shift(SystemSpec::simple(SystemKind::shift2, H));
  const System ex1(SystemSpec::simple(SystemKind::example1, H));
  const auto sp = family_pairs(7, H, 20);
  const auto ep = example1_pairs(10, 0, H);
  std::size_t cases = 0, agree = 0;
  bool ok = sp.size() == 20 && ep.size() == 10;
  for (std::uint64_t N : {2, 3, 5}) {
    for (const auto& [sys, pairs] : {std::pair{shift, sp}, std::pair{ex1, ep}}) {
      const auto rep = theorem2_harness(sys, pairs, N, H / N, Thresholds::for_system(sys));
      for (const auto& c : rep.cases) {
        ++cases;
        agree += c.data["flag_f"] == c.data["flag_fN"] ? 1 : 0;
      }
      ok = ok && rep.passed;
    }
  }
  ok = ok && cases == 90 && agree == cases;
  return {ok, std::to_string(agree) + "/" + std::to_string(cases) + " agree"};
}

Outcome theorem1() {
  const std::uint64_t H = 100'000;
  const System sys(SystemSpec::simple(SystemKind::shift2, H));
  const auto pairs = family_pairs(8, H);
  const auto th = Thresholds::for_system(sys);
  bool ok = true;
  std::string detail;
  std::uint64_t recount_bad = 0;
  for (std::uint64_t M : {2, 3}) {
    const auto rep = theorem1_harness(sys, pairs, SequenceSpec::arith(M), H, th);
    const double rate = rep.agreement_rate();
    ok = ok && rate >= 0.95 && rep.metrics["counting_violations"] == 0;
    detail += "M=" + std::to_string(M) + " agreement " + fmt("%.3f", rate) + " ";

    // Sampled indices below t can never outnumber all indices below t, and the same for >= t.
    for (const auto& p : pairs) {
      const auto d = sys.distances(p.x, p.y, H);
      const auto cps = checkpoint_schedule(H, 0, Geometric{1.25});
      for (double t : th.t_grid()) {
        std::uint64_t sub = 0, m = 0, all = 0;
        std::size_t next = 0;
        for (std::uint64_t i = 0; i < H && next < cps.size(); ++i) {
          all += d[i] < t ? 1 : 0;
          if (i % M == 0) {
            ++m;
            sub += d[i] < t ? 1 : 0;
          }
          if (cps[next] == i + 1) {
            if (sub > all || m - sub > i + 1 - all) ++recount_bad;
            ++next;
          }
        }
      }
    }
  }
  ok = ok && recount_bad == 0;
  return {ok, detail + "counting violations " + std::to_string(recount_bad)};
}

Outcome witness() {
  const std::uint64_t H = 100'000;
  const System sys(SystemSpec::simple(SystemKind::shift2, H));
  const auto th = Thresholds::for_system(sys);
  std::size_t found = 0, verified = 0, tried = 0;
  for (const auto& p : family_pairs(5, H)) {
    const auto prof = distance_profile(sys, p.x, p.y, H);
    if (!liyorke_verdict(prof, th).flag) continue;
    ++tried;
    const auto w = witness_sequence(prof, th);
    if (!w.sequence) continue;
    ++found;
    if (sdc_verdict(sys, p.x, p.y, *w.sequence, H, th).sdc1.set) ++verified;
  }
  return {tried == 10 && found == 10 && verified == 10,
          std::to_string(tried) + " Li-Yorke pairs, " + std::to_string(found) + " witnesses, " +
              std::to_string(verified) + " verified sdc1"};
}

Outcome isometry() {
  const std::uint64_t H = 100'000;
  const System rot(SystemSpec::simple(SystemKind::rotation, H));
  const auto th = Thresholds::for_system(rot);
  std::size_t bad = 0;
  const auto pairs = sampled_pairs(rot, 100, 9);
  for (const auto& p : pairs) {
    const double a = std::get<CirclePoint>(p.x).real(), b = std::get<CirclePoint>(p.y).real();
    const double gap = std::fabs(a - b);
    const double d0 = std::min(gap, 1.0 - gap);
    const auto v = classify_pair(rot, p.x, p.y, H, th, {SequenceSpec::arith(2)});
    const auto est = estimate_for(distance_profile(rot, p.x, p.y, H), th);
    for (std::size_t k = 0; k < est.size(); ++k) {
      const double t = est.t_grid[k];
      if (est.lower[k] != est.upper[k]) ++bad;
      if (std::fabs(t - d0) > 1e-12 && est.lower[k] != (d0 < t ? 1.0 : 0.0)) ++bad;
    }
    for (auto f : {ChaosFlag::liyorke, ChaosFlag::dc1, ChaosFlag::dc2, ChaosFlag::dc2prime, ChaosFlag::dc3,
                   ChaosFlag::sdc1})
      bad += flag_of(v, f) ? 1 : 0;
  }
  return {bad == 0, std::to_string(pairs.size()) + " rotation pairs, " + std::to_string(bad) + " deviations"};
}

// Worst-case separation reached by tent perturbations within `radius`, long double iteration.
long double tent_separation(long double x, long double radius, Rng& rng) {
  long double worst = 1.0L;
  for (int s = 0; s < 64; ++s) {
    long double a = x, b = std::clamp(x + radius * (2.0L * uniform01(rng) - 1.0L), 0.0L, 1.0L), best = 0.0L;
    for (int i = 0; i < 200; ++i) {
      best = std::max(best, std::fabs(a - b));
      a = oracle::tent(a);
      b = oracle::tent(b);
    }
    worst = std::min(worst, best);
  }
  return worst;
}

Outcome rt_indicators() {
  const std::uint64_t H = 100'000;
  RTParams p;
  const auto tent = rt_verdict(System(SystemSpec::simple(SystemKind::tent, H)), p);
  const auto rot = rt_verdict(System(SystemSpec::simple(SystemKind::rotation, H)), p);
  const auto id = rt_verdict(System(SystemSpec::simple(SystemKind::identity, H)), p);

  // Direct sampling: tent perturbations separate beyond 0.1, identity orbits stay in one cell.
  Rng rng(21);
  long double tent_min = 1.0L;
  for (int k = 0; k < 8; ++k) {
    const long double x = uniform_open01(rng);
    for (long double r : {1e-2L, 1e-4L, 1e-6L}) tent_min = std::min(tent_min, tent_separation(x, r, rng));
  }
  const bool ok = tent.sensitivity_constant_estimate >= 0.1 && tent.transitive && tent_min >= 0.1L &&
                  rot.sensitivity_constant_estimate == 0.0 && !id.transitive && id.cells_visited == 1 &&
                  id.sensitivity_constant_estimate == 0.0;
  return {ok, "tent " + fmt("%g", tent.sensitivity_constant_estimate) + (tent.transitive ? " transitive" : "") +
                  " (oracle min separation " + fmt("%.3f", static_cast<double>(tent_min)) + "), rotation " +
                  fmt("%g", rot.sensitivity_constant_estimate) + ", identity " +
                  fmt("%g", id.sensitivity_constant_estimate) + " with " + std::to_string(id.cells_visited) +
                  " cell"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"example1 upper density at t=0.3", upper_density},
      {"example1 lower density at L_4", lower_density},
      {"example1 odd-index distance is 1", parity_law},
      {"example1 is dc2prime and not dc1", example1_verdict},
      {"implication lattice on built-in systems", lattice},
      {"dc2prime agreement for f and f^N", theorem2},
      {"dc1 and sdc1 agree along bounded gaps", theorem1},
      {"witness sequences re-verify as sdc1", witness},
      {"rotation distribution is a step, flags clear", isometry},
      {"R-T indicators on tent, rotation, identity", rt_indicators},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s (%s)\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
