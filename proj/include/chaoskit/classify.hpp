#pragma once

// Finite-horizon chaos verdicts for orbit pairs.
//
// The defining conditions (lower = 0, upper = 1, upper > 0, lower < upper on an
// interval) are exact statements about limits. Here each one is replaced by a
// comparison against a tolerance band:
//
//   "= 0"   value <= zero_tol          "= 1"   value >= 1 - one_tol
//   "< 1"   value <= 1 - gap_tol       "> 0"   value >= gap_tol
//   DC3     upper - lower >= gap_tol - max(zero_tol, one_tol) on >= j_min_width
//           consecutive grid scales
//
// and the witness scale eps must have at least j_min_width - 1 grid scales
// below it. With zero_tol, one_tol < gap_tol and each of them + gap_tol <= 1
// these surrogates satisfy DC1 => DC2, DC2', DC2 => DC3, DC2' => DC3 exactly,
// because the lower estimate is nondecreasing in t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chaoskit/distfn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/systems.hpp"

namespace chaoskit {

struct Thresholds {
  double zero_tol = 0.05;
  double one_tol = 0.05;
  double gap_tol = 0.1;
  std::size_t j_min_width = 3;
  double proximal_tol = 1e-3;
  double separation_tol = 0.1;
  /// Smallest probed scale: lower end of the default t grid and the
  /// "close" cut used when building witness sequences.
  double resolution = 1e-4;
  std::size_t grid_points = 32;
  std::uint64_t burn_in = 0;

  void validate() const {
    auto unit = [](double v, const char* field) {
      if (!(v > 0.0 && v < 1.0)) throw ConfigError(field, "must lie in (0, 1)");
    };
    unit(zero_tol, "thresholds.zero_tol");
    unit(one_tol, "thresholds.one_tol");
    unit(gap_tol, "thresholds.gap_tol");
    unit(proximal_tol, "thresholds.proximal_tol");
    unit(separation_tol, "thresholds.separation_tol");
    unit(resolution, "thresholds.resolution");
    if (!(zero_tol + one_tol < 1.0)) throw ConfigError("thresholds.one_tol", "zero_tol + one_tol must be < 1");
    if (!(std::max(zero_tol, one_tol) < gap_tol))
      throw ConfigError("thresholds.gap_tol", "must exceed both zero_tol and one_tol");
    if (zero_tol + gap_tol > 1.0 || one_tol + gap_tol > 1.0)
      throw ConfigError("thresholds.gap_tol", "gap_tol plus zero_tol or one_tol must not exceed 1");
    if (j_min_width < 1) throw ConfigError("thresholds.j_min_width", "must be >= 1");
    if (grid_points < 2) throw ConfigError("thresholds.grid_points", "must be >= 2");
  }

  /// Minimum upper - lower separation that counts as a DC3 gap.
  double dc3_separation() const { return gap_tol - std::max(zero_tol, one_tol); }

  std::vector<double> t_grid() const { return log_t_grid(resolution, grid_points); }

  /// Defaults adapted to the metric's resolution: on a space whose smallest
  /// positive distance below horizon_cap is r > 0, scales at or
  /// below r are unobservable, so the grid starts at 1.2 r and distances equal
  /// to r count as proximal.
  static Thresholds for_system(const System& system, Thresholds base) {
    const double floor = system.distance_floor();
    if (floor > 0.0) {
      base.resolution = std::clamp(1.2 * floor, base.resolution, 0.5);
      base.proximal_tol = std::max(base.proximal_tol, base.resolution);
    }
    return base;
  }
  static Thresholds for_system(const System& system) { return for_system(system, Thresholds{}); }
};

// ---------------------------------------------------------------------------
// Verdict records

struct LiYorkeResult {
  bool flag = false;
  double min_distance = 0.0;
  double max_distance = 0.0;
  std::uint64_t tail_start = 0;
};

struct Flag {
  bool set = false;
  std::optional<double> epsilon;                       // witnessing scale
  std::optional<std::pair<double, double>> interval;   // J = [t_a, t_b] for DC3
};

struct DcFlags {
  Flag dc1, dc2, dc2prime, dc3;
};

struct SdcResult {
  SequenceSpec sequence;
  std::size_t samples = 0;
  bool truncated = false;
  Flag sdc1, sdc2, sdc3;
};

struct ChaosVerdict {
  std::optional<LiYorkeResult> liyorke;
  std::optional<DcFlags> dc;
  std::vector<SdcResult> sdc;
  std::uint64_t horizon = 0;
  Thresholds thresholds;

  bool any_sdc1() const {
    return std::any_of(sdc.begin(), sdc.end(), [](const SdcResult& r) { return r.sdc1.set; });
  }
};

// ---------------------------------------------------------------------------

/// Proximal (min over the tail <= proximal_tol) and not asymptotic (max >= separation_tol).
inline LiYorkeResult liyorke_verdict(const DistanceProfile& profile, const Thresholds& th) {
  if (profile.size() < 2) throw ArgumentError("liyorke_verdict: profile needs at least two values");
  const std::uint64_t start = std::min<std::uint64_t>(th.burn_in, profile.size() - 1);
  const auto first = profile.values.begin() + static_cast<std::ptrdiff_t>(start);
  const auto [lo, hi] = std::minmax_element(first, profile.values.end());
  LiYorkeResult r;
  r.tail_start = start;
  r.min_distance = *lo;
  r.max_distance = *hi;
  r.flag = *lo <= th.proximal_tol && *hi >= th.separation_tol;
  return r;
}

inline DcFlags dc_verdict(const DistributionEstimate& est, const Thresholds& th) {
  const std::size_t T = est.size();
  const std::size_t w = th.j_min_width;
  // Largest grid index whose lower estimate is <= bound (lower is nondecreasing in t).
  auto last_below = [&](double bound) -> std::optional<std::size_t> {
    std::optional<std::size_t> k;
    for (std::size_t j = 0; j < T; ++j)
      if (est.lower[j] <= bound) k = j;
    return k;
  };
  auto witness = [&](std::optional<std::size_t> k) -> std::optional<double> {
    if (k && *k + 1 >= w) return est.t_grid[*k];
    return std::nullopt;
  };
  const bool upper_one = std::all_of(est.upper.begin(), est.upper.end(),
                                     [&](double u) { return u >= 1.0 - th.one_tol; });
  const bool upper_pos = std::all_of(est.upper.begin(), est.upper.end(), [&](double u) { return u >= th.gap_tol; });
  const auto eps_zero = witness(last_below(th.zero_tol));
  const auto eps_below_one = witness(last_below(1.0 - th.gap_tol));

  DcFlags f;
  if (eps_zero && upper_one) f.dc1 = Flag{true, eps_zero, std::nullopt};
  if (eps_below_one && upper_one) f.dc2 = Flag{true, eps_below_one, std::nullopt};
  if (eps_zero && upper_pos) f.dc2prime = Flag{true, eps_zero, std::nullopt};

  // Longest run of scales with a gap; ties keep the first.
  const double sep = th.dc3_separation();
  std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
  for (std::size_t j = 0; j < T; ++j) {
    if (est.upper[j] - est.lower[j] >= sep) {
      if (run_len == 0) run_start = j;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len >= w && best_len > 0)
    f.dc3 = Flag{true, std::nullopt, std::make_pair(est.t_grid[best_start], est.t_grid[best_start + best_len - 1])};
  return f;
}

/// Estimate on the profile with the default grid and checkpoints of `th`.
inline DistributionEstimate estimate_for(const DistanceProfile& profile, const Thresholds& th) {
  return distribution_estimate(profile, th.t_grid(), default_checkpoints(profile, th.burn_in), th.burn_in);
}

inline constexpr std::size_t kMinSequenceSamples = 16;

/// SDC flags from an already computed profile.
inline SdcResult sdc_from_profile(const DistanceProfile& profile, const SequenceSpec& q, const Thresholds& th) {
  const auto sub = subsample_profile(profile, q);
  if (sub.size() < kMinSequenceSamples)
    throw InsufficientData("sdc_verdict: only " + std::to_string(sub.size()) + " sampled indices (need " +
                           std::to_string(kMinSequenceSamples) + ")");
  if (th.burn_in >= sub.size()) throw InsufficientData("sdc_verdict: burn-in consumes the subsampled profile");
  const auto flags = dc_verdict(estimate_for(sub, th), th);
  SdcResult r;
  r.sequence = q;
  r.samples = sub.size();
  r.truncated = sub.truncated;
  r.sdc1 = flags.dc1;
  r.sdc2 = flags.dc2;
  r.sdc3 = flags.dc3;
  return r;
}

inline SdcResult sdc_verdict(const System& system, const Point& x, const Point& y, const SequenceSpec& q,
                             std::size_t horizon, const Thresholds& th) {
  return sdc_from_profile(distance_profile(system, x, y, horizon), q, th);
}

/// Li-Yorke, DC and SDC verdicts for one pair. The identity sequence is always
/// evaluated first: it is the canonical SDC witness for a DC1 pair.
inline ChaosVerdict classify_profile(const DistanceProfile& profile, const Thresholds& th,
                                     const std::vector<SequenceSpec>& sequences = {}) {
  th.validate();
  ChaosVerdict v;
  v.horizon = profile.size();
  v.thresholds = th;
  v.liyorke = liyorke_verdict(profile, th);
  v.dc = dc_verdict(estimate_for(profile, th), th);
  v.sdc.push_back(sdc_from_profile(profile, SequenceSpec::identity(), th));
  for (const auto& q : sequences)
    if (!q.is_identity()) v.sdc.push_back(sdc_from_profile(profile, q, th));
  return v;
}

inline ChaosVerdict classify_pair(const System& system, const Point& x, const Point& y, std::size_t horizon,
                                  const Thresholds& th, const std::vector<SequenceSpec>& sequences = {}) {
  return classify_profile(distance_profile(system, x, y, horizon), th, sequences);
}

/// Violations of the implication lattice
///   (a) DC1 => DC2, SDC, DC2'   (b) DC2 => DC3, DC2' => DC3
///   (c) DC1, DC2, DC2', SDC => Li-Yorke   (d) SDC1 => SDC2 => SDC3
inline std::vector<std::string> consistency_check(const ChaosVerdict& v) {
  std::vector<std::string> out;
  const bool ly = v.liyorke && v.liyorke->flag;
  if (v.dc) {
    const auto& d = *v.dc;
    if (d.dc1.set && !d.dc2.set) out.emplace_back("(a) DC1 implies DC2");
    if (d.dc1.set && !d.dc2prime.set) out.emplace_back("(a) DC1 implies DC2'");
    if (d.dc1.set && !v.sdc.empty() && !v.any_sdc1()) out.emplace_back("(a) DC1 implies SDC");
    if (d.dc2.set && !d.dc3.set) out.emplace_back("(b) DC2 implies DC3");
    if (d.dc2prime.set && !d.dc3.set) out.emplace_back("(b) DC2' implies DC3");
    if (v.liyorke) {
      if (d.dc1.set && !ly) out.emplace_back("(c) DC1 implies Li-Yorke");
      if (d.dc2.set && !ly) out.emplace_back("(c) DC2 implies Li-Yorke");
      if (d.dc2prime.set && !ly) out.emplace_back("(c) DC2' implies Li-Yorke");
    }
  }
  for (const auto& s : v.sdc) {
    if (s.sdc1.set && !s.sdc2.set) out.push_back("(d) SDC1 implies SDC2 along " + s.sequence.label());
    if (s.sdc2.set && !s.sdc3.set) out.push_back("(d) SDC2 implies SDC3 along " + s.sequence.label());
    if (v.liyorke && s.sdc1.set && !ly) out.push_back("(c) SDC implies Li-Yorke along " + s.sequence.label());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scrambled sets

enum class ChaosFlag { liyorke, dc1, dc2, dc2prime, dc3, sdc1 };

inline std::string_view to_string(ChaosFlag f) {
  switch (f) {
    case ChaosFlag::liyorke: return "liyorke";
    case ChaosFlag::dc1: return "dc1";
    case ChaosFlag::dc2: return "dc2";
    case ChaosFlag::dc2prime: return "dc2prime";
    case ChaosFlag::dc3: return "dc3";
    case ChaosFlag::sdc1: return "sdc1";
  }
  return "unknown";
}

inline std::optional<ChaosFlag> parse_chaos_flag(std::string_view s) {
  for (auto f : {ChaosFlag::liyorke, ChaosFlag::dc1, ChaosFlag::dc2, ChaosFlag::dc2prime, ChaosFlag::dc3,
                 ChaosFlag::sdc1})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

inline bool flag_of(const ChaosVerdict& v, ChaosFlag f) {
  switch (f) {
    case ChaosFlag::liyorke: return v.liyorke && v.liyorke->flag;
    case ChaosFlag::dc1: return v.dc && v.dc->dc1.set;
    case ChaosFlag::dc2: return v.dc && v.dc->dc2.set;
    case ChaosFlag::dc2prime: return v.dc && v.dc->dc2prime.set;
    case ChaosFlag::dc3: return v.dc && v.dc->dc3.set;
    case ChaosFlag::sdc1: return v.any_sdc1();
  }
  return false;
}

struct PairVerdict {
  std::size_t i = 0, j = 0;
  ChaosVerdict verdict;
};

struct ScrambledSet {
  std::vector<std::size_t> members;   // candidate indices, ascending
  std::vector<PairVerdict> pairs;     // every i < j, in lexicographic order
};

/// Greedy clique growth under "pair satisfies flag", seeded from every
/// candidate in turn; the largest clique found wins (first on ties).
inline ScrambledSet scrambled_search(const System& system, const std::vector<Point>& candidates, std::size_t horizon,
                                     const Thresholds& th, ChaosFlag flag = ChaosFlag::dc1) {
  const std::size_t n = candidates.size();
  if (n < 2) throw ArgumentError("scrambled_search: need at least two candidates");
  ScrambledSet out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.pairs.push_back(PairVerdict{i, j, {}});
  parallel_for(out.pairs.size(), [&](std::size_t k) {
    auto& p = out.pairs[k];
    p.verdict = classify_pair(system, candidates[p.i], candidates[p.j], horizon, th);
  });

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& p : out.pairs) adj[p.i][p.j] = adj[p.j][p.i] = flag_of(p.verdict, flag);

  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> clique{s};
    for (std::size_t off = 1; off < n; ++off) {
      const std::size_t c = (s + off) % n;
      if (std::all_of(clique.begin(), clique.end(), [&](std::size_t m) { return adj[c][m]; })) clique.push_back(c);
    }
    if (clique.size() > out.members.size()) out.members = clique;
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

// ---------------------------------------------------------------------------
// Witness sequences

struct WitnessResult {
  std::optional<SequenceSpec> sequence;
  std::size_t runs = 0;
  std::string failure;
};

/// Builds Q from a Li-Yorke pair by alternating runs of close indices
/// (d < resolution) and far indices (d >= max(separation_tol, resolution)).
/// A close run continues until the running close fraction reaches
/// 1 - one_tol/2, a far run until it falls to zero_tol/2. An unfinished
/// final run is dropped. At least four complete runs are required.
inline WitnessResult witness_sequence(const DistanceProfile& profile, const Thresholds& th) {
  WitnessResult r;
  if (profile.size() < 2 || !liyorke_verdict(profile, th).flag) {
    r.failure = "profile is not Li-Yorke at these thresholds";
    return r;
  }
  const double close_cut = th.resolution;
  const double far_cut = std::max(th.separation_tol, th.resolution);
  std::vector<std::uint64_t> q, run_ends;
  std::uint64_t close = 0;
  std::size_t pos = 0;
  bool want_close = true;
  const std::size_t len = profile.size();

  while (true) {
    const std::size_t q_mark = q.size();
    const std::uint64_t close_mark = close;
    bool done = false;
    while (pos < len) {
      const double d = profile.values[pos];
      const bool take = want_close ? d < close_cut : d >= far_cut;
      if (take) {
        q.push_back(pos);
        if (want_close) ++close;
        const double frac = static_cast<double>(close) / static_cast<double>(q.size());
        done = want_close ? frac >= 1.0 - th.one_tol / 2 : frac <= th.zero_tol / 2;
      }
      ++pos;
      if (done) break;
    }
    if (!done) {
      q.resize(q_mark);
      close = close_mark;
      break;
    }
    run_ends.push_back(q.size());
    ++r.runs;
    want_close = !want_close;
  }
  if (r.runs < 4) {
    r.failure = "index pools exhausted after " + std::to_string(r.runs) + " runs (need 4)";
    return r;
  }
  r.sequence = SequenceSpec::witness(std::move(q), std::move(run_ends));
  return r;
}

}  // namespace chaoskit
