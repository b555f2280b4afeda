#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpi/core.hpp"

namespace cpi {

/// Symmetric finite-range infection kernel together with the infection rate.
///
/// An infected site x sends infection arrows to y at rate lambda * p(y - x).
/// Weights are stored for displacements -range..range; p(0) is always zero.
class Kernel {
 public:
  /// Nearest-neighbour kernel p(+1) = p(-1) = 1/2.
  static Kernel nearest_neighbor(double lambda);

  /// Uniform kernel on {-range..range} \ {0}.
  static Kernel uniform(double lambda, int range);

  /// Symmetric kernel from one-sided weights w_1..w_M (displacements 1..M); the
  /// weights are mirrored and normalized. Trailing zeros are rejected so that
  /// range() is the true support radius.
  static Kernel from_one_sided(double lambda, std::span<const double> weights);

  /// Parses the `--kernel` flag format: comma separated one-sided weights.
  static Kernel parse(double lambda, const std::string& csv_weights);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] int range() const { return range_; }

  /// p(d); zero outside [-range, range] and at d == 0.
  [[nodiscard]] double weight(int d) const;

  /// Arrow rate lambda * p(d).
  [[nodiscard]] double rate(int d) const { return lambda_ * weight(d); }

  /// Displacements with p(d) > 0, ascending.
  [[nodiscard]] std::vector<int> support() const;

  /// Human-readable one-sided weights, the inverse of parse().
  [[nodiscard]] std::string weights_csv() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(double lambda, std::vector<double> weights);

  double lambda_ = 0.0;
  int range_ = 0;
  std::vector<double> weights_;  // index d + range_
};

}  // namespace cpi
