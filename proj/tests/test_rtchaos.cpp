#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chaoskit/chaoskit.hpp"
#include "oracles.hpp"

using namespace chaoskit;

namespace {

std::vector<Point> bases(const System& s, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(s.sample(rng));
  return out;
}

const std::vector<double> kRadii{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

}  // namespace

TEST_CASE("sensitivity examples", "[rtchaos]") {
  const System id(SystemSpec::simple(SystemKind::identity, 1000));
  CHECK(sensitivity_estimate(id, bases(id, 8, 1), kRadii, 200, 64) == 0.0);

  const System rot(SystemSpec::simple(SystemKind::rotation, 1000));
  CHECK(sensitivity_estimate(rot, bases(rot, 8, 2), kRadii, 200, 64) == 0.0);

  const System tent(SystemSpec::simple(SystemKind::tent, 1000));
  CHECK(sensitivity_estimate(tent, bases(tent, 8, 3), kRadii, 200, 64) >= 0.25);
}

TEST_CASE("tent separation against a long double oracle", "[rtchaos]") {
  // Orbits within 1e-6 separate beyond 1/4 within 200 steps in the direct formula as well.
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const long double x = uniform_open01(rng);
    const long double y = std::clamp(x + 1e-6L * (uniform01(rng) - 0.5L), 0.0L, 1.0L);
    long double a = x, b = y, best = 0;
    for (int i = 0; i < 200; ++i) {
      best = std::max(best, std::fabs(a - b));
      a = oracle::tent(a);
      b = oracle::tent(b);
    }
    REQUIRE(best >= 0.25L);
  }
}

TEST_CASE("more samples never lower the sensitivity estimate", "[rtchaos][property]") {
  for (auto kind : {SystemKind::tent, SystemKind::logistic4, SystemKind::shift2}) {
    const System s(SystemSpec::simple(kind, 1000));
    const auto b = bases(s, 4, 9);
    double prev = 0.0;
    for (std::size_t samples : {1, 2, 4, 16, 64}) {
      const double v = sensitivity_estimate(s, b, kRadii, 60, samples, 7);
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("isometries are never sensitive", "[rtchaos][property]") {
  for (double alpha : {kGoldenAlpha, 0.1, 0.333}) {
    auto spec = SystemSpec::simple(SystemKind::rotation, 1000);
    spec.alpha = alpha;
    const System rot(spec);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      REQUIRE(sensitivity_estimate(rot, bases(rot, 4, seed), {0.5, 0.1, 1e-3}, 100, 16, seed) == 0.0);
  }
}

TEST_CASE("sensitivity argument errors", "[rtchaos][errors]") {
  const System tent(SystemSpec::simple(SystemKind::tent, 1000));
  const auto b = bases(tent, 2, 1);
  CHECK_THROWS_AS(sensitivity_estimate(tent, {}, kRadii, 10, 4), ArgumentError);
  CHECK_THROWS_AS(sensitivity_estimate(tent, b, {}, 10, 4), ArgumentError);
  CHECK_THROWS_AS(sensitivity_estimate(tent, b, kRadii, 10, 0), ArgumentError);
  CHECK_THROWS_AS(sensitivity_estimate(tent, b, {1e-3, 1e-2}, 10, 4), ArgumentError);
  CHECK_THROWS_AS(sensitivity_estimate(tent, b, {-1.0}, 10, 4), ArgumentError);
  CHECK_THROWS_AS(sensitivity_estimate(tent, b, kRadii, 2000, 4), HorizonExceeded);
}

TEST_CASE("transitivity examples", "[rtchaos]") {
  const System id(SystemSpec::simple(SystemKind::identity, 100'000));
  const auto r_id = transitivity_probe(id, 0.01, 10'000, 16);
  CHECK_FALSE(r_id.transitive);
  CHECK(r_id.cells_visited == 1);

  const System rot(SystemSpec::simple(SystemKind::rotation, 100'000));
  const auto r_rot = transitivity_probe(rot, 0.01, 10'000, 1);
  CHECK(r_rot.transitive);
  CHECK(r_rot.cells_total == 100);

  const System tent(SystemSpec::simple(SystemKind::tent, 100'000));
  CHECK(transitivity_probe(tent, 0.01, 100'000, 64).transitive);

  const System ex1(SystemSpec::simple(SystemKind::example1, 100'000));
  CHECK_THROWS_AS(transitivity_probe(ex1, 0.01, 1000, 4), Unsupported);
  CHECK_THROWS_AS(transitivity_probe(tent, 0.0, 1000, 4), ArgumentError);
}

TEST_CASE("rotation visitation against a direct count", "[rtchaos]") {
  // cells visited by x_k = frac(x0 + k alpha), computed in long double
  const std::size_t cells = 100;
  for (std::size_t horizon : {50, 100, 150, 1000}) {
    std::vector<bool> seen(cells, false);
    long double x = 0.0L;
    for (std::size_t k = 0; k < horizon; ++k) {
      seen[std::min<std::size_t>(static_cast<std::size_t>(x * cells), cells - 1)] = true;
      x += static_cast<long double>(kGoldenAlpha);
      x -= std::floor(x);
    }
    const auto expect = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));

    const System rot(SystemSpec::simple(SystemKind::rotation, 10'000));
    const auto part = rot.partition(0.01);
    std::vector<bool> lib(cells, false);
    Point p = rot.from_coordinate(0.0);
    for (std::size_t k = 0; k < horizon; ++k) {
      lib[part->cell_of(p)] = true;
      p = rot.step(p);
    }
    CHECK(static_cast<std::size_t>(std::count(lib.begin(), lib.end(), true)) == expect);
  }
}

TEST_CASE("transitivity is monotone in the horizon", "[rtchaos][property]") {
  for (auto kind : {SystemKind::tent, SystemKind::logistic4, SystemKind::rotation, SystemKind::shift2}) {
    const System s(SystemSpec::simple(kind, 20'000));
    std::size_t prev = 0;
    bool was = false;
    for (std::size_t h : {10, 100, 1000, 5000, 20'000}) {
      const auto r = transitivity_probe(s, 0.05, h, 8, 3);
      REQUIRE(r.cells_visited >= prev);
      REQUIRE(r.cells_visited <= r.cells_total);
      if (was) REQUIRE(r.transitive);
      prev = r.cells_visited;
      was = r.transitive;
    }
    CHECK(was);
  }
}

TEST_CASE("R-T verdicts", "[rtchaos]") {
  RTParams p;
  p.seed = 4;
  const System tent(SystemSpec::simple(SystemKind::tent, 100'000));
  const auto t = rt_verdict(tent, p);
  CHECK(t.rt);
  CHECK(t.sensitivity_constant_estimate >= 0.1);

  const System rot(SystemSpec::simple(SystemKind::rotation, 100'000));
  const auto r = rt_verdict(rot, p);
  CHECK(r.transitive);
  CHECK(r.sensitivity_constant_estimate == 0.0);
  CHECK_FALSE(r.rt);

  const System id(SystemSpec::simple(SystemKind::identity, 100'000));
  const auto i = rt_verdict(id, p);
  CHECK_FALSE(i.rt);
  CHECK_FALSE(i.transitive);

  const System ex1(SystemSpec::simple(SystemKind::example1, 100'000));
  CHECK_THROWS_AS(rt_verdict(ex1, p), Unsupported);

  const auto h = rt_harness(p);
  CHECK(h.passed);
  CHECK(h.cases.size() == 3);
}

TEST_CASE("worker count does not change results", "[rtchaos][property]") {
  const System tent(SystemSpec::simple(SystemKind::tent, 10'000));
  const auto b = bases(tent, 4, 12);
  setenv("CHAOSKIT_THREADS", "1", 1);
  const double one = sensitivity_estimate(tent, b, kRadii, 40, 8, 5);
  const auto t1 = transitivity_probe(tent, 0.02, 5000, 8, 5);
  setenv("CHAOSKIT_THREADS", "4", 1);
  const double four = sensitivity_estimate(tent, b, kRadii, 40, 8, 5);
  const auto t4 = transitivity_probe(tent, 0.02, 5000, 8, 5);
  unsetenv("CHAOSKIT_THREADS");
  CHECK(one == four);
  CHECK(t1.cells_visited == t4.cells_visited);
}
