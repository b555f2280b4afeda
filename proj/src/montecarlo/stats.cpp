#include "cpi/montecarlo/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cpi/core.hpp"

namespace cpi {

Interval wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw InvalidArgument("wilson: no trials");
  if (successes < 0 || successes > trials) throw InvalidArgument("wilson: count outside [0, trials]");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Proportion proportion(std::int64_t count, std::int64_t trials, double z) {
  return {count, trials, static_cast<double>(count) / static_cast<double>(trials), wilson(count, trials, z)};
}

DecayFit decay_fit(std::span<const double> x, std::span<const double> p, DecayTransform transform) {
  if (x.size() != p.size()) throw InvalidArgument("decay_fit: size mismatch");
  std::vector<double> xs, ys;
  DecayFit fit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw InvalidArgument("decay_fit: probability outside [0, 1]");
    if (p[i] == 0.0) {
      ++fit.dropped;
      continue;
    }
    xs.push_back(transform == DecayTransform::kSqrt ? std::sqrt(x[i]) : x[i]);
    ys.push_back(std::log(p[i]));
  }
  fit.used = xs.size();
  if (xs.size() < 3) throw InvalidArgument("decay_fit: fewer than three positive probabilities");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("decay_fit: all x values equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::vector<TailRow> tail_estimates(std::span<const double> abs_values, std::span<const double> L_grid) {
  if (abs_values.empty()) throw InvalidArgument("tail_estimates: empty sample");
  std::vector<TailRow> out;
  for (double L : L_grid) {
    const auto c = std::count_if(abs_values.begin(), abs_values.end(), [L](double v) { return v > L; });
    out.push_back({L, proportion(c, static_cast<std::int64_t>(abs_values.size()))});
  }
  return out;
}

SpeedEstimate speed_estimate(std::span<const double> edges, double T, double missing) {
  if (!(T > 0.0)) throw InvalidArgument("speed_estimate: T must be positive");
  SpeedEstimate s;
  double sum = 0, sq = 0;
  for (double r : edges) {
    if (r == missing) {
      ++s.excluded;
      continue;
    }
    const double v = r / T;
    sum += v;
    sq += v * v;
    ++s.used;
  }
  if (s.used == 0) throw InvalidArgument("speed_estimate: no usable edges");
  const double n = static_cast<double>(s.used);
  s.alpha = sum / n;
  const double var = s.used > 1 ? std::max(0.0, (sq - n * s.alpha * s.alpha) / (n - 1)) : 0.0;
  const double half = kZ95 * std::sqrt(var / n);
  s.ci = {s.alpha - half, s.alpha + half};
  return s;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("empirical_quantile: empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("empirical_quantile: q outside (0, 1]");
  std::sort(values.begin(), values.end());
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(k, 1) - 1];
}

}  // namespace cpi
