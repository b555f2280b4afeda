#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cpi/montecarlo/stats.hpp"
#include "cpi/opercolation/field.hpp"

namespace cpi {

/// Frequency of r simultaneously closed cells and eps_hat = freq^{1/r}.
/// ci_lo / ci_hi are the Wilson bounds of freq mapped through x^{1/r}.
struct ClosureRow {
  int r = 0;
  std::int64_t count = 0;
  std::int64_t trials = 0;
  double freq = 0.0;
  double eps_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Unconditional proxy for closure below eps. Each trial is a group of r
/// cells on one level, consecutive members 2k+2 apart; groups inside one
/// field use levels and positions 2k+2 apart as well. Throws when fewer
/// than `min_trials` groups fit in the ensemble.
std::vector<ClosureRow> closure_estimate(std::span<const PercField> fields, int k, int max_r = 3,
                                         std::int64_t min_trials = 30);

/// JSON array of rows.
void write_closure_json(std::ostream& out, const std::vector<ClosureRow>& rows);

}  // namespace cpi
