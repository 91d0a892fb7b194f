#pragma once

// Distance profiles and empirical lower/upper distribution functions.
//
// For a profile d_0, d_1, ... the empirical density at scale t and length n is
//   (1/n) #{ i : d_i < t, 0 <= i < n }
// (strict inequality). The lower and upper distribution functions are the
// liminf / limsup of this quantity in n; at finite horizon they are estimated
// as the min / max over a checkpoint schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chaoskit/errors.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/systems.hpp"

namespace chaoskit {

struct DistanceProfile {
  std::vector<double> values;
  std::string source;
  std::optional<std::string> sequence;   // set when subsampled along some Q
  bool truncated = false;                // Q listed indices beyond the profile
  /// Natural checkpoints (prefix lengths) in (0, values.size()].
  std::vector<std::uint64_t> boundaries;

  std::size_t size() const noexcept { return values.size(); }
};

/// d(f^i x, f^i y) for 0 <= i < horizon.
inline DistanceProfile distance_profile(const System& system, const Point& x, const Point& y, std::size_t horizon,
                                        std::string source = {}) {
  DistanceProfile p;
  p.values = system.distances(x, y, horizon);
  p.source = source.empty() ? system.name() : std::move(source);
  p.boundaries = system.block_boundaries(horizon);
  return p;
}

/// values[q_i] for every q_i below the profile length. Boundaries map to the
/// number of sampled indices preceding them; witness run ends are appended.
inline DistanceProfile subsample_profile(const DistanceProfile& profile, const SequenceSpec& q) {
  const auto idx = q.materialize(profile.size());
  if (idx.empty()) throw InsufficientData("subsample_profile: no sequence index falls inside the profile");
  DistanceProfile out;
  out.source = profile.source;
  out.sequence = q.label();
  out.truncated = q.truncated_by(profile.size());
  out.values.reserve(idx.size());
  for (auto i : idx) out.values.push_back(profile.values[i]);

  std::vector<std::uint64_t> b;
  for (auto pos : profile.boundaries) {
    const auto n = static_cast<std::uint64_t>(std::lower_bound(idx.begin(), idx.end(), pos) - idx.begin());
    if (n >= 1) b.push_back(n);
  }
  for (auto n : q.run_ends)
    if (n >= 1 && n <= idx.size()) b.push_back(n);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  out.boundaries = std::move(b);
  return out;
}

/// (1/n) #{ i < n : values[i] < t }.
inline double empirical_density(std::span<const double> values, double t, std::size_t n) {
  if (n == 0) throw ArgumentError("empirical_density: n must be positive");
  if (n > values.size()) throw ArgumentError("empirical_density: n exceeds the profile length");
  if (!(t > 0.0)) throw ArgumentError("empirical_density: t must be positive");
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (values[i] < t) ++count;
  return static_cast<double>(count) / static_cast<double>(n);
}

inline double empirical_density(const DistanceProfile& profile, double t, std::size_t n) {
  return empirical_density(std::span<const double>(profile.values), t, n);
}

// ---------------------------------------------------------------------------
// Checkpoint schedules

struct Geometric {
  double ratio = 1.25;
};
struct BlockBoundaries {
  std::vector<std::uint64_t> values;
};
using CheckpointPolicy = std::variant<Geometric, BlockBoundaries>;

/// Strictly increasing n in (burn_in, horizon].
inline std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t horizon, std::uint64_t burn_in,
                                                      const CheckpointPolicy& policy) {
  if (burn_in >= horizon) throw ArgumentError("checkpoint_schedule: burn_in must be < horizon");
  std::vector<std::uint64_t> out;
  if (const auto* g = std::get_if<Geometric>(&policy)) {
    if (!(g->ratio > 1.0)) throw ArgumentError("checkpoint_schedule: geometric ratio must exceed 1");
    std::uint64_t n = burn_in + 1;
    while (n < horizon) {
      out.push_back(n);
      const auto next = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * g->ratio));
      n = std::max(n + 1, next);
    }
    out.push_back(horizon);
  } else {
    for (auto n : std::get<BlockBoundaries>(policy).values)
      if (n > burn_in && n <= horizon) out.push_back(n);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  if (out.empty()) throw ArgumentError("checkpoint_schedule: empty schedule");
  return out;
}

inline std::vector<std::uint64_t> merge_checkpoints(std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

/// Geometric schedule over the profile plus its natural boundaries past burn-in.
inline std::vector<std::uint64_t> default_checkpoints(const DistanceProfile& profile, std::uint64_t burn_in = 0,
                                                      double ratio = 1.25) {
  auto cps = checkpoint_schedule(profile.size(), burn_in, Geometric{ratio});
  std::vector<std::uint64_t> extra;
  for (auto b : profile.boundaries)
    if (b > burn_in && b <= profile.size()) extra.push_back(b);
  return merge_checkpoints(std::move(cps), extra);
}

/// `count` log-spaced scales from `lo` to 1 inclusive.
inline std::vector<double> log_t_grid(double lo = 1e-4, std::size_t count = 32) {
  if (!(lo > 0.0 && lo < 1.0)) throw ArgumentError("t grid lower end must lie in (0, 1)");
  if (count < 2) throw ArgumentError("t grid needs at least two points");
  std::vector<double> grid(count);
  const double a = std::log10(lo);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = std::pow(10.0, a + (0.0 - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  grid.back() = 1.0;
  return grid;
}

// ---------------------------------------------------------------------------
// Estimates

struct DistributionEstimate {
  std::vector<double> t_grid;
  std::vector<double> lower;   // min over checkpoints
  std::vector<double> upper;   // max over checkpoints
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t burn_in = 0;

  std::size_t size() const noexcept { return t_grid.size(); }
};

/// Per-t min and max of the empirical density over the checkpoints.
///
/// One pass over the profile: each value is binned by the first grid scale
/// that exceeds it, so the count below t_k is a prefix sum over bins.
inline DistributionEstimate distribution_estimate(const DistanceProfile& profile, const std::vector<double>& t_grid,
                                                  std::vector<std::uint64_t> checkpoints, std::uint64_t burn_in = 0) {
  if (t_grid.empty()) throw ArgumentError("distribution_estimate: empty t grid");
  if (checkpoints.empty()) throw ArgumentError("distribution_estimate: empty checkpoint list");
  if (profile.size() == 0) throw InsufficientData("distribution_estimate: empty profile");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0)) throw ArgumentError("distribution_estimate: t values must be positive");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw ArgumentError("distribution_estimate: t grid must increase");
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.front() == 0 || checkpoints.back() > profile.size())
    throw ArgumentError("distribution_estimate: checkpoints must lie in (0, profile length]");

  const std::size_t T = t_grid.size();
  DistributionEstimate est;
  est.t_grid = t_grid;
  est.lower.assign(T, 1.0);
  est.upper.assign(T, 0.0);
  est.checkpoints = checkpoints;
  est.burn_in = burn_in;

  // bins[k] = #{ i : t_{k-1} <= d_i < t_k } (bin 0 starts at -inf), bin T means d_i >= t_{T-1}.
  std::vector<std::uint64_t> bins(T + 1, 0);
  std::size_t next_cp = 0;
  for (std::size_t i = 0; i < profile.size() && next_cp < checkpoints.size(); ++i) {
    const double d = profile.values[i];
    const auto k = static_cast<std::size_t>(std::upper_bound(t_grid.begin(), t_grid.end(), d) - t_grid.begin());
    ++bins[k];
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == i + 1) {
      const double n = static_cast<double>(i + 1);
      std::uint64_t below = 0;
      for (std::size_t j = 0; j < T; ++j) {
        below += bins[j];
        const double dens = static_cast<double>(below) / n;
        est.lower[j] = std::min(est.lower[j], dens);
        est.upper[j] = std::max(est.upper[j], dens);
      }
      ++next_cp;
    }
  }
  return est;
}

/// Estimate with the default schedule (geometric 1.25 plus natural boundaries).
inline DistributionEstimate distribution_estimate(const DistanceProfile& profile, const std::vector<double>& t_grid) {
  return distribution_estimate(profile, t_grid, default_checkpoints(profile));
}

}  // namespace chaoskit
