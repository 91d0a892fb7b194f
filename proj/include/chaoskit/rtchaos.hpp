#pragma once

// Sampled indicators for Ruelle-Takens chaos: sensitive dependence on initial
// conditions and a dense orbit. Both are estimates, never proofs.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "chaoskit/errors.hpp"
#include "chaoskit/parallel.hpp"
#include "chaoskit/random.hpp"
#include "chaoskit/systems.hpp"

namespace chaoskit {

inline const std::vector<double> kSensitivityLadder{0.5, 0.25, 0.1, 0.05, 0.01};

/// Largest delta in `ladder` such that for every base point and every radius
/// some sampled perturbation within that radius separates from the base orbit
/// by at least delta within `horizon` iterates; 0 if none survives.
///
/// The perturbations for (base k, radius r) come from one substream, so adding
/// samples only extends the set of witnesses.
inline double sensitivity_estimate(const System& system, const std::vector<Point>& base_points,
                                   const std::vector<double>& radii, std::size_t horizon,
                                   std::size_t samples_per_radius, std::uint64_t seed = 0,
                                   const std::vector<double>& ladder = kSensitivityLadder) {
  if (base_points.empty() || radii.empty() || samples_per_radius == 0 || ladder.empty())
    throw ArgumentError("sensitivity_estimate: empty inputs");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0)) throw ArgumentError("sensitivity_estimate: radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw ArgumentError("sensitivity_estimate: radii must decrease");
  }
  const std::size_t R = radii.size();
  std::vector<double> achieved(base_points.size() * R, 0.0);
  parallel_for(achieved.size(), [&](std::size_t cell) {
    const std::size_t b = cell / R, r = cell % R;
    Rng rng = substream(seed, cell);
    double best = 0.0;
    for (std::size_t s = 0; s < samples_per_radius; ++s) {
      const Point y = system.perturb(base_points[b], radii[r], rng);
      const auto d = system.distances(base_points[b], y, horizon);
      best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    achieved[cell] = best;
  });
  const double worst = *std::min_element(achieved.begin(), achieved.end());
  double out = 0.0;
  for (double delta : ladder)
    if (worst >= delta) out = std::max(out, delta);
  return out;
}

struct TransitivityResult {
  bool transitive = false;
  std::size_t cells_visited = 0;   // best single orbit
  std::size_t cells_total = 0;
};

/// Set iff some sampled start visits every cell of the grid_eps partition within the horizon.
inline TransitivityResult transitivity_probe(const System& system, double grid_eps, std::size_t horizon,
                                             std::size_t start_samples, std::uint64_t seed = 0) {
  if (!(grid_eps > 0.0)) throw ArgumentError("transitivity_probe: grid_eps must be positive");
  if (start_samples == 0 || horizon == 0) throw ArgumentError("transitivity_probe: empty inputs");
  if (horizon > system.horizon_cap()) throw HorizonExceeded("transitivity_probe: horizon exceeds horizon_cap");
  const auto part = system.partition(grid_eps);
  if (!part) throw Unsupported("transitivity_probe: " + system.name() + " has no bounded state-space partition");

  std::vector<std::size_t> visited(start_samples, 0);
  parallel_for(start_samples, [&](std::size_t k) {
    Rng rng = substream(seed, k);
    Point p = system.sample(rng);
    std::vector<bool> seen(part->cells, false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < horizon && count < part->cells; ++i) {
      const std::size_t c = part->cell_of(p);
      if (!seen[c]) {
        seen[c] = true;
        ++count;
      }
      if (i + 1 < horizon) p = system.step(p);
    }
    visited[k] = count;
  });
  TransitivityResult r;
  r.cells_total = part->cells;
  r.cells_visited = *std::max_element(visited.begin(), visited.end());
  r.transitive = r.cells_visited == r.cells_total;
  return r;
}

struct RTParams {
  std::size_t base_points = 8;
  std::vector<double> radii{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::size_t sensitivity_horizon = 200;
  std::size_t samples_per_radius = 64;
  double grid_eps = 0.01;
  std::size_t transitivity_horizon = 100'000;
  std::size_t start_samples = 64;
  std::uint64_t seed = 0;
};

struct RTReport {
  double sensitivity_constant_estimate = 0.0;
  bool transitive = false;
  std::size_t cells_visited = 0;
  std::size_t cells_total = 0;
  bool rt = false;
  RTParams params;
};

inline RTReport rt_verdict(const System& system, const RTParams& params) {
  std::vector<Point> bases;
  Rng rng = substream(params.seed, 0xB45E);
  for (std::size_t k = 0; k < params.base_points; ++k) bases.push_back(system.sample(rng));
  RTReport r;
  r.params = params;
  r.sensitivity_constant_estimate = sensitivity_estimate(system, bases, params.radii, params.sensitivity_horizon,
                                                         params.samples_per_radius, params.seed);
  const auto t = transitivity_probe(system, params.grid_eps, params.transitivity_horizon, params.start_samples,
                                    params.seed);
  r.transitive = t.transitive;
  r.cells_visited = t.cells_visited;
  r.cells_total = t.cells_total;
  r.rt = r.transitive && r.sensitivity_constant_estimate > 0.0;
  return r;
}

}  // namespace chaoskit
