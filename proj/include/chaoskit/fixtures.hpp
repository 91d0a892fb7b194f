#pragma once

// Standard point pairs used by the harnesses and the CLI suite.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chaoskit/random.hpp"
#include "chaoskit/systems.hpp"
#include "chaoskit/theorems.hpp"

namespace chaoskit {

/// The first `count` family members as shift2 points.
inline std::vector<Point> family_points(std::size_t count, std::uint64_t horizon_cap) {
  std::vector<Point> out;
  for (const auto& w : family_words(count)) out.emplace_back(scrambled_family_point(w, horizon_cap));
  return out;
}

inline std::string word_string(const std::vector<std::uint8_t>& w) {
  std::string s;
  for (auto b : w) s += static_cast<char>('0' + b);
  return s;
}

/// Every pair i < j of the first `members` family points, at most `limit` pairs.
inline std::vector<PointPair> family_pairs(std::size_t members, std::uint64_t horizon_cap,
                                           std::size_t limit = SIZE_MAX) {
  const auto words = family_words(members);
  const auto pts = family_points(members, horizon_cap);
  std::vector<PointPair> out;
  for (std::size_t i = 0; i < members && out.size() < limit; ++i)
    for (std::size_t j = i + 1; j < members && out.size() < limit; ++j)
      out.push_back({"family(" + word_string(words[i]) + "," + word_string(words[j]) + ")", pts[i], pts[j]});
  return out;
}

/// Seed pairs in (0, 1)^2 with distinct members; (0.25, 0.75) comes first.
inline std::vector<std::pair<double, double>> example1_seed_pairs(std::size_t count, std::uint64_t seed) {
  std::vector<std::pair<double, double>> out;
  if (count == 0) return out;
  out.emplace_back(0.25, 0.75);
  Rng rng = substream(seed, 0xE1);
  while (out.size() < count) {
    const double a = uniform_open01(rng), b = uniform_open01(rng);
    if (a != b) out.emplace_back(a, b);
  }
  return out;
}

inline std::vector<PointPair> example1_pairs(std::size_t count, std::uint64_t seed, std::uint64_t horizon_cap) {
  const System sys(SystemSpec::simple(SystemKind::example1, horizon_cap));
  std::vector<PointPair> out;
  for (const auto& [a, b] : example1_seed_pairs(count, seed))
    out.push_back({"example1(" + std::to_string(a) + "," + std::to_string(b) + ")", sys.from_coordinate(a),
                   sys.from_coordinate(b)});
  return out;
}

/// Independent uniform samples from the system's state space.
inline std::vector<PointPair> sampled_pairs(const System& system, std::size_t count, std::uint64_t seed) {
  std::vector<PointPair> out;
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng = substream(seed, k);
    Point x = system.sample(rng);
    Point y = system.sample(rng);
    out.push_back({system.name() + "#" + std::to_string(k), std::move(x), std::move(y)});
  }
  return out;
}

}  // namespace chaoskit
