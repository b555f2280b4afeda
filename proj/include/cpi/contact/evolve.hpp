#pragma once

#include <span>
#include <vector>

#include "cpi/contact/configuration.hpp"
#include "cpi/graphical/harris.hpp"

namespace cpi {

/// eta_t^{init}(H) sampled at `times`.
///
/// boundary_contaminated is set when the window could change a sampled state:
/// a side without a tail is contaminated once the process enters the M sites
/// next to that edge; a filled side is contaminated once the influence of the
/// sites next to that edge reaches the far edge of the state.
struct Trajectory {
  Configuration init;
  Window window;
  std::vector<Time> times;
  std::vector<Configuration> states;
  bool boundary_contaminated = false;
};

Trajectory evolve(const HarrisEvents& h, const Configuration& init, std::span<const Time> times);

/// Evolves every initial condition against the same events in one sweep
/// (at most 62 initial conditions).
std::vector<Trajectory> couple(const HarrisEvents& h, std::span<const Configuration> inits,
                               std::span<const Time> times);

/// Checks sample times are nondecreasing and inside [0, t_max].
void validate_times(const Window& w, std::span<const Time> times);

}  // namespace cpi
