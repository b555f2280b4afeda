#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cpi/opercolation/field.hpp"

namespace cpi {

inline constexpr int kNoParticle = std::numeric_limits<int>::min();

/// Cells connected to the sources by open paths, level by level.
struct LevelSets {
  int first_level = 0;
  std::vector<std::vector<int>> sites;  // sites[k]: level first_level + k, ascending
  std::vector<int> rightmost;           // R per level, kNoParticle when empty

  [[nodiscard]] const std::vector<int>& at(int n) const {
    return sites.at(static_cast<std::size_t>(n - first_level));
  }
  [[nodiscard]] int R(int n) const { return rightmost.at(static_cast<std::size_t>(n - first_level)); }
};

/// Open paths (|x_{i+1} - x_i| = 1, every visited cell open, the start cell
/// included) from `sources`, all at level `level`, up to the field's top.
LevelSets open_reach(const PercField& field, const std::vector<int>& sources, int level = 0);

/// Cell (m, n) is connected by an open path to some cell at height `height`.
bool percolates_to(const PercField& field, int m, int n, int height);

/// Sequence m_0..m_i of an open path, one entry per level starting at 0.
using BlockPath = std::vector<int>;

struct GammaResult {
  bool holds = false;
  std::optional<BlockPath> left;   // from (-2, 0), m_n < -beta n
  std::optional<BlockPath> right;  // from (2, 0), m_n > beta n
};

/// Gamma(i): open paths from (-2, 0) and (2, 0) to level i that avoid
/// {(m, n) : -beta n <= m <= beta n}. Requires i <= n_max and m_max >= i + 2,
/// so no admissible path can leave the field.
GammaResult gamma_event(const PercField& field, double beta, int i);

/// Lowest-numbered witness path from `start` to level `height` through cells
/// accepted by `allowed` (open cells only); used for the side paths.
std::optional<BlockPath> find_path(const PercField& field, int start, int height,
                                   const std::function<bool(int, int)>& allowed, bool prefer_outer_left);

}  // namespace cpi
