// Density of close returns for the example1 translation at the block ends.

#include <cstdio>

#include "chaoskit/chaoskit.hpp"

int main() {
  using namespace chaoskit;
  const std::uint64_t horizon = 1'000'000;
  const System sys(SystemSpec::simple(SystemKind::example1, horizon));
  const auto profile = distance_profile(sys, sys.from_coordinate(0.25), sys.from_coordinate(0.75), horizon);

  std::printf("%10s %12s %12s\n", "n", "t=0.3", "t=0.5");
  for (auto n : profile.boundaries)
    std::printf("%10llu %12.6f %12.6f\n", static_cast<unsigned long long>(n), empirical_density(profile, 0.3, n),
                empirical_density(profile, 0.5, n));
  std::printf("%10llu %12.6f %12.6f\n", static_cast<unsigned long long>(horizon),
              empirical_density(profile, 0.3, horizon), empirical_density(profile, 0.5, horizon));

  const auto v = classify_profile(profile, Thresholds::for_system(sys));
  std::printf("dc2prime %s, dc1 %s\n", v.dc->dc2prime.set ? "set" : "clear", v.dc->dc1.set ? "set" : "clear");
}
