// Classify one tent-map pair and print the estimated distribution functions.

#include <cstdio>

#include "chaoskit/chaoskit.hpp"

int main() {
  using namespace chaoskit;
  const std::uint64_t horizon = 100'000;
  const System tent(SystemSpec::simple(SystemKind::tent, horizon));
  const Point x = tent.from_coordinate(0.2137), y = tent.from_coordinate(0.7071);
  const Thresholds th = Thresholds::for_system(tent);

  const auto profile = distance_profile(tent, x, y, horizon);
  const auto est = estimate_for(profile, th);
  std::printf("%10s %10s %10s\n", "t", "F_lower", "F_upper");
  for (std::size_t k = 0; k < est.size(); k += 4)
    std::printf("%10.4g %10.4f %10.4f\n", est.t_grid[k], est.lower[k], est.upper[k]);

  const auto v = classify_profile(profile, th, {SequenceSpec::arith(2)});
  for (auto f : {ChaosFlag::liyorke, ChaosFlag::dc1, ChaosFlag::dc2, ChaosFlag::dc2prime, ChaosFlag::dc3,
                 ChaosFlag::sdc1})
    std::printf("%-9s %s\n", std::string(to_string(f)).c_str(), flag_of(v, f) ? "set" : "clear");
  std::printf("lattice violations: %zu\n", consistency_check(v).size());
}
