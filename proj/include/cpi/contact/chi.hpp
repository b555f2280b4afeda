#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpi/contact/evolve.hpp"

namespace cpi {

/// Three-state process: 0 vacant, 1 occupied by the (-inf,0] population,
/// 2 occupied only by the all-ones population. values[i][x - window.x_min].
struct ChiTrajectory {
  Window window;
  std::vector<Time> times;
  std::vector<std::vector<std::uint8_t>> values;

  [[nodiscard]] std::uint8_t at(std::size_t i, Site x) const {
    return values[i][static_cast<std::size_t>(x - window.x_min)];
  }
};

/// I_{(-inf,0]} + 2 I_{(0,inf)} on the window.
std::vector<std::uint8_t> chi_standard_init(const Window& w);

/// chi from the coupled pair (eta^{(-inf,0]}, eta^{1}).
ChiTrajectory chi_from_coupling(const Trajectory& lower, const Trajectory& upper);

/// Direct sweep: a death sets 0; an arrow from a 1 turns 0 or 2 into 1; an
/// arrow from a 2 turns 0 into 2.
ChiTrajectory chi_direct(const HarrisEvents& h, std::span<const std::uint8_t> init,
                         std::span<const Time> times);

/// Least site where chi is 2; window.x_max + 1 when none.
Site chi_first_two(const ChiTrajectory& chi, std::size_t i);

}  // namespace cpi
