#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cpi/opercolation/paths.hpp"
#include "cpi/renorm/block_field.hpp"
#include "cpi/renorm/expanding.hpp"

namespace cpi {

/// Space-time rectangle [sites] x [from, to]; from == to for the lines.
struct Rect {
  SiteInterval sites;
  Time from = 0.0;
  Time to = 0.0;
};

/// B = B^l u B^r u (I_0 x {0}) in the coordinates of the field (the
/// construction shifted to (0, 1)).
struct BarrierSet {
  BlockPath left;
  BlockPath right;
  std::vector<Rect> rects;
  int levels = 0;
  double beta_bar = 0.0;  // 0.999 times the largest slope whose cone stays inside
};

/// Side paths of Gamma(n_max) on Psi, assembled into B; nullopt when
/// Gamma(n_max) fails ("no-path").
std::optional<BarrierSet> barrier_region(const BlockField& psi_field);

/// Same from witness paths already found by gamma_event.
std::optional<BarrierSet> barrier_from_paths(const BlockParams& params, const GammaResult& g);

/// Throws InvalidArgument when a barrier violates the path constraints.
void validate_barrier(const BlockParams& params, const BarrierSet& b);

struct PropertyReport {
  std::int64_t queries = 0;
  double beta_bar = 0.0;
  Time s_max = 0.0;
  std::int64_t premise_i = 0;
  std::int64_t violations_i = 0;
  std::int64_t violations_ii = 0;       // r_s^0 >= beta_bar s (s >= 1), >= 0 (s < 1)
  std::int64_t violations_ii_weak = 0;  // r_s^0 >= max{0, beta_bar s - 1}
  std::int64_t premise_iii = 0;
  std::int64_t violations_iii = 0;
  std::int64_t contaminated = 0;  // queries where a path met the window edge

  [[nodiscard]] bool clean() const { return violations_i == 0 && violations_ii == 0 && violations_iii == 0; }
};

/// Samples (x, z, s) with s <= s_max and checks the three implications by
/// forward sweeps on h (origin at (0,0), not shifted).
PropertyReport check_barrier_properties(const HarrisEvents& h, const BlockParams& params, double beta_bar,
                                        Time s_max, std::int64_t queries, std::uint64_t seed);

void write_property_json(std::ostream& out, const PropertyReport& r);

}  // namespace cpi
