// Search the shift2 family for a DC1-scrambled subset and build an SDC witness.

#include <cstdio>

#include "chaoskit/chaoskit.hpp"

int main() {
  using namespace chaoskit;
  const std::uint64_t horizon = 100'000;
  const System shift(SystemSpec::simple(SystemKind::shift2, horizon));
  const Thresholds th = Thresholds::for_system(shift);

  const auto words = family_words(6);
  const auto set = scrambled_search(shift, family_points(6, horizon), horizon, th, ChaosFlag::dc1);
  std::printf("dc1-scrambled members:");
  for (auto m : set.members) std::printf(" %s", word_string(words[m]).c_str());
  std::printf("\n");

  const auto pair = family_pairs(2, horizon).front();
  const auto profile = distance_profile(shift, pair.x, pair.y, horizon);
  const auto w = witness_sequence(profile, th);
  if (!w.sequence) {
    std::printf("no witness: %s\n", w.failure.c_str());
    return 1;
  }
  const auto sdc = sdc_from_profile(profile, *w.sequence, th);
  std::printf("%s: witness with %zu runs, %zu indices, sdc1 %s\n", pair.id.c_str(), w.runs, sdc.samples,
              sdc.sdc1.set ? "set" : "clear");
}
