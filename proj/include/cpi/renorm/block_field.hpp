#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cpi/graphical/harris.hpp"
#include "cpi/opercolation/field.hpp"
#include "cpi/renorm/geometry.hpp"

namespace cpi {

/// Outcome of the four defining conditions of one cell.
struct CellConditions {
  bool parent = true;     // some parent has phi = 1 (always true on level 0)
  bool vacancy = false;   // no vacant run of vacant_len sites in I_{m-1} u I_{m+1}
  bool descent = false;   // occupied sites there descend from the cell's source
  bool intrusion = false; // no outside infection reaches J without the source

  [[nodiscard]] std::uint8_t phi() const {
    if (!parent) return 2;
    return vacancy && descent && intrusion ? 1 : 0;
  }
  friend bool operator==(const CellConditions&, const CellConditions&) = default;
};

/// Phi in {0,1,2} and Psi = [Phi != 0] on a Lambda window. Cells outside the
/// window (or outside the cone of a cone window) read as phi = 0, psi = 0.
class BlockField {
 public:
  BlockField() = default;
  BlockField(BlockParams params, LambdaWindow lw);

  [[nodiscard]] const BlockParams& params() const { return params_; }
  [[nodiscard]] const LambdaWindow& lambda_window() const { return lw_; }

  [[nodiscard]] std::uint8_t phi(int m, int n) const {
    return lw_.contains(m, n) ? cells_[index(m, n)].phi() : 0;
  }
  [[nodiscard]] bool psi(int m, int n) const { return phi(m, n) != 0; }
  [[nodiscard]] const CellConditions& conditions(int m, int n) const { return cells_.at(index(m, n)); }
  void set_conditions(int m, int n, CellConditions c) { cells_.at(index(m, n)) = c; }

  /// Psi as a percolation field of the same shape.
  [[nodiscard]] PercField psi_field() const;

  std::uint64_t seed = 0;
  Origin origin;
  Window window;              // raw window of the construction
  bool contaminated = false;  // window edges may have changed some cell

 private:
  [[nodiscard]] std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * lw_.m_max + 1) +
           static_cast<std::size_t>(m + lw_.m_max);
  }

  BlockParams params_;
  LambdaWindow lw_;
  std::vector<CellConditions> cells_;
};

/// Computes the field bottom-up from one Harris construction (in the
/// coordinates of the view `h`).
BlockField block_field(const HarrisEvents& h, const BlockParams& params, const LambdaWindow& lw);

/// Sites the window must contain for a Lambda window: I_{+-(m_max+1)} plus M.
SiteInterval required_sites(const BlockParams& params, const LambdaWindow& lw);
/// Throws WindowError naming the first cell the window cannot support.
void check_coverage(const HarrisEvents& h, const BlockParams& params, const LambdaWindow& lw);

/// CSV `m,n,phi,psi` over the cells of the window.
void write_block_csv(std::ostream& out, const BlockField& f);

}  // namespace cpi
