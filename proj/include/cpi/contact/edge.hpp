#pragma once

#include <limits>
#include <vector>

#include "cpi/contact/evolve.hpp"

namespace cpi {

/// Value of r_t for an empty configuration without tails.
inline constexpr Site kNoEdge = std::numeric_limits<Site>::min();

struct EdgeSeries {
  std::vector<Time> times;
  std::vector<Site> values;  // kNoEdge when undefined
};

/// r_t at the sample times of a trajectory.
EdgeSeries edge_series(const Trajectory& tr);

/// Right edge of eta^{(-inf,0]} at event resolution on [0, T]: one entry at
/// time 0 and one at every change.
struct EdgePath {
  EdgeSeries series;
  bool contaminated = false;
};
EdgePath edge_path(const HarrisEvents& h, Time T);

/// Prefix maxima q_t = max{r_s : s <= t}; kNoEdge entries are skipped.
EdgeSeries running_max_edge(const EdgeSeries& e);

/// r_t <= gamma t for all t <= T, checked at every change of the edge.
/// Throws ContaminationError when the window could alter the edge.
bool is_gamma_slow(const HarrisEvents& h, double gamma, Time T);

/// Same test on an edge path that was already computed.
bool is_gamma_slow(const EdgeSeries& path, double gamma, Time T);

/// [0, inf) x 0 <-> [0, L] x T inside (0, inf).
///
/// strict: sources [1, x_max] x 0, paths inside {x >= 1}, target [1, L].
/// non-strict: sources [0, x_max] x 0, paths inside {x >= 0}, target [0, L].
/// Throws ContaminationError when the answer is false but the right edge of
/// the window can influence the target.
bool right_path_inside_event(const HarrisEvents& h, Site L, Time T, bool strict = true);

}  // namespace cpi
