#pragma once

#include <cmath>

#include "cpi/core.hpp"

namespace cpi {

/// Renormalization parameters. vacant_len is the length of a vacant run that
/// breaks condition "no vacant interval of length N^{1/2}"; default ceil(sqrt N).
struct BlockParams {
  int K = 0;
  int N = 0;
  double beta = 0.5;
  int M = 1;  // kernel range
  int vacant_len = 0;

  static BlockParams make(int K, int N, double beta, int M);
  void validate() const;

  [[nodiscard]] double slab() const { return static_cast<double>(K) * N; }
  /// Time KN n.
  [[nodiscard]] Time level_time(int n) const { return slab() * n; }
};

/// Finite piece of Lambda: cells (m, n), m + n even, |m| <= m_max,
/// 0 <= n <= n_max. With `cone`, only cells with |m| + n <= m_max are
/// computed; those are exactly the cells whose ancestry stays inside.
struct LambdaWindow {
  int m_max = 0;
  int n_max = 0;
  bool cone = false;

  [[nodiscard]] bool contains(int m, int n) const {
    return n >= 0 && n <= n_max && m >= -m_max && m <= m_max && ((m + n) % 2 + 2) % 2 == 0 &&
           (!cone || std::abs(m) + n <= m_max);
  }
};

/// I_m = (mN/2 - N/2, mN/2 + N/2] as integers.
SiteInterval block_interval(int N, int m);
inline SiteInterval block_interval(const BlockParams& p, int m) { return block_interval(p.N, m); }

/// I_{m-1} u I_{m+1} = ((m-2)N/2, (m+2)N/2].
SiteInterval neighbour_span(const BlockParams& p, int m);

/// J_{(m,n)} = [mN/2 - M, mN/2 + M] x [KNn, KN(n+1)].
struct Box {
  SiteInterval sites;
  Time from = 0.0;
  Time to = 0.0;
};
Box block_box(const BlockParams& p, int m, int n);

/// (z, s) in V(rho) = {-rho s <= z <= rho s}.
bool cone_contains(double rho, SpaceTimePoint point);
/// (z, s) in apex + V(rho).
bool cone_contains(double rho, SpaceTimePoint apex, SpaceTimePoint point);

}  // namespace cpi
