#include "cpi/renorm/geometry.hpp"

#include <sstream>

namespace cpi {
namespace {

// floor(a / 2) for any sign.
std::int64_t half_floor(std::int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
std::int64_t half_ceil(std::int64_t a) { return -half_floor(-a); }

}  // namespace

BlockParams BlockParams::make(int K, int N, double beta, int M) {
  BlockParams p{K, N, beta, M, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(N))))};
  p.validate();
  return p;
}

void BlockParams::validate() const {
  std::ostringstream os;
  if (M < 1) os << "range M must be positive; ";
  if (N <= 2 * M) os << "N must exceed 2M; ";
  if (K <= M || N <= M) os << "K and N must exceed M; ";
  if (!(beta > 0.0 && beta < 1.0)) os << "beta must lie in (0, 1); ";
  if (vacant_len < 1) os << "vacant length must be positive; ";
  if (!os.str().empty()) throw InvalidArgument("block params: " + os.str());
}

SiteInterval block_interval(int N, int m) {
  const std::int64_t lo = half_floor(std::int64_t{m - 1} * N) + 1;
  const std::int64_t hi = half_floor(std::int64_t{m + 1} * N);
  return {static_cast<Site>(lo), static_cast<Site>(hi)};
}

SiteInterval neighbour_span(const BlockParams& p, int m) {
  return {block_interval(p, m - 1).lo, block_interval(p, m + 1).hi};
}

Box block_box(const BlockParams& p, int m, int n) {
  const std::int64_t twice_centre = std::int64_t{m} * p.N;
  const std::int64_t lo = half_ceil(twice_centre - 2 * std::int64_t{p.M});
  const std::int64_t hi = half_floor(twice_centre + 2 * std::int64_t{p.M});
  return {{static_cast<Site>(lo), static_cast<Site>(hi)}, p.level_time(n), p.level_time(n + 1)};
}

bool cone_contains(double rho, SpaceTimePoint point) {
  if (point.time < 0.0) return false;
  const double z = point.site;
  return -rho * point.time <= z && z <= rho * point.time;
}

bool cone_contains(double rho, SpaceTimePoint apex, SpaceTimePoint point) {
  return cone_contains(rho, {point.site - apex.site, point.time - apex.time});
}

}  // namespace cpi
