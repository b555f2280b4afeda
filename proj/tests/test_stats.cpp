#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpi/montecarlo/stats.hpp"

using namespace cpi;

TEST_CASE("wilson") {
  const auto a = wilson(30, 100);
  CHECK(a.lo < 0.3);
  CHECK(a.hi > 0.3);
  CHECK(wilson(0, 10).lo == 0.0);
  CHECK(wilson(10, 10).hi == doctest::Approx(1.0));
  CHECK(wilson(300, 1000).halfwidth() < wilson(30, 100).halfwidth() / 3.0);
  CHECK_THROWS_AS(wilson(1, 0), std::invalid_argument);
}

TEST_CASE("decay_fit") {
  std::vector<double> x{1, 2, 3, 4, 5}, p, q;
  for (double v : x) {
    p.push_back(std::exp(-2 * v));
    q.push_back(std::exp(-std::sqrt(v)));
  }
  auto f = decay_fit(x, p);
  CHECK(f.slope == doctest::Approx(-2.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  f = decay_fit(x, q, DecayTransform::kSqrt);
  CHECK(f.slope == doctest::Approx(-1.0));
  p[1] = 0.0;
  f = decay_fit(x, p);
  CHECK(f.dropped == 1);
  CHECK(f.used == 4);
}

TEST_CASE("tails, speed and quantiles") {
  std::vector<double> ones(40, 1.0);
  const std::vector<double> grid{0.0, 5.0};
  const auto t = tail_estimates(ones, grid);
  CHECK(t[0].p.freq == 1.0);
  CHECK(t[1].p.freq == 0.0);
  std::vector<double> r(50, 20.0);
  const auto s = speed_estimate(r, 10.0, -1.0);
  CHECK(s.alpha == 2.0);
  CHECK(empirical_quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.9) == 9.0);
}
