#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cpi {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double halfwidth() const { return 0.5 * (hi - lo); }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
Interval wilson(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct Proportion {
  std::int64_t count = 0;
  std::int64_t trials = 0;
  double freq = 0.0;
  Interval ci;
};
Proportion proportion(std::int64_t count, std::int64_t trials, double z = kZ95);

enum class DecayTransform { kIdentity, kSqrt };

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t used = 0;  // points with positive probability
  std::size_t dropped = 0;
};

/// Least squares of log p against x (or sqrt x). Points with p == 0 are
/// dropped and counted; needs at least three usable points.
DecayFit decay_fit(std::span<const double> x, std::span<const double> p,
                   DecayTransform transform = DecayTransform::kIdentity);

/// P(|rho_t| > L) for each L in the grid, with Wilson intervals.
struct TailRow {
  double L = 0.0;
  Proportion p;
};
std::vector<TailRow> tail_estimates(std::span<const double> abs_values, std::span<const double> L_grid);

/// Mean of r_T / T with a normal-approximation 95% interval.
struct SpeedEstimate {
  double alpha = 0.0;
  Interval ci;
  std::size_t used = 0;
  std::size_t excluded = 0;
};
/// `edges` are r_T values; entries equal to `missing` are excluded and counted.
SpeedEstimate speed_estimate(std::span<const double> edges, double T, double missing);

/// Empirical q-quantile, the smallest sample value v with F(v) >= q.
double empirical_quantile(std::vector<double> values, double q);

}  // namespace cpi
