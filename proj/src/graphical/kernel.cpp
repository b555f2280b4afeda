#include "cpi/graphical/kernel.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cpi {

Kernel::Kernel(double lambda, std::vector<double> weights)
    : lambda_(lambda), range_(static_cast<int>(weights.size() / 2)), weights_(std::move(weights)) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw InvalidArgument("kernel: lambda must be a finite nonnegative number");
  }
  if (range_ < 1) throw InvalidArgument("kernel: range must be at least 1");
  double total = 0.0;
  for (int d = -range_; d <= range_; ++d) {
    const double w = weights_[static_cast<std::size_t>(d + range_)];
    if (!(w >= 0.0)) throw InvalidArgument("kernel: weights must be nonnegative");
    if (d == 0 && w != 0.0) throw InvalidArgument("kernel: p(0) must be zero");
    if (std::abs(w - weights_[static_cast<std::size_t>(-d + range_)]) > 1e-15) {
      throw InvalidArgument("kernel: weights must be symmetric");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("kernel: weights must sum to 1");
}

Kernel Kernel::nearest_neighbor(double lambda) { return Kernel(lambda, {0.5, 0.0, 0.5}); }

Kernel Kernel::uniform(double lambda, int range) {
  if (range < 1) throw InvalidArgument("kernel: range must be at least 1");
  std::vector<double> w(static_cast<std::size_t>(2 * range + 1), 1.0 / (2.0 * range));
  w[static_cast<std::size_t>(range)] = 0.0;
  return Kernel(lambda, std::move(w));
}

Kernel Kernel::from_one_sided(double lambda, std::span<const double> weights) {
  if (weights.empty()) throw InvalidArgument("kernel: no weights given");
  if (!(weights.back() > 0.0)) throw InvalidArgument("kernel: last weight must be positive");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("kernel: weights must be nonnegative");
    total += w;
  }
  const int m = static_cast<int>(weights.size());
  std::vector<double> full(static_cast<std::size_t>(2 * m + 1), 0.0);
  for (int d = 1; d <= m; ++d) {
    const double p = weights[static_cast<std::size_t>(d - 1)] / (2.0 * total);
    full[static_cast<std::size_t>(m + d)] = p;
    full[static_cast<std::size_t>(m - d)] = p;
  }
  return Kernel(lambda, std::move(full));
}

Kernel Kernel::parse(double lambda, const std::string& csv_weights) {
  std::vector<double> w;
  std::stringstream ss(csv_weights);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("kernel: cannot parse weight '" + item + "'");
    }
  }
  return from_one_sided(lambda, w);
}

double Kernel::weight(int d) const {
  if (d < -range_ || d > range_) return 0.0;
  return weights_[static_cast<std::size_t>(d + range_)];
}

std::vector<int> Kernel::support() const {
  std::vector<int> out;
  for (int d = -range_; d <= range_; ++d) {
    if (weight(d) > 0.0) out.push_back(d);
  }
  return out;
}

std::string Kernel::weights_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (int d = 1; d <= range_; ++d) {
    if (d > 1) os << ',';
    os << 2.0 * weight(d);
  }
  return os.str();
}

}  // namespace cpi
