#include "cpi/contact/chi.hpp"

namespace cpi {

std::vector<std::uint8_t> chi_standard_init(const Window& w) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w.width()));
  for (Site x = w.x_min; x <= w.x_max; ++x) v[static_cast<std::size_t>(x - w.x_min)] = x <= 0 ? 1 : 2;
  return v;
}

ChiTrajectory chi_from_coupling(const Trajectory& lower, const Trajectory& upper) {
  if (lower.times != upper.times || !(lower.window == upper.window)) {
    throw InvalidArgument("chi_from_coupling: trajectories use different grids or windows");
  }
  ChiTrajectory out;
  out.window = lower.window;
  out.times = lower.times;
  const auto width = static_cast<std::size_t>(out.window.width());
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    std::vector<std::uint8_t> v(width, 0);
    for (Site x : upper.states[i].sites.sites()) v[static_cast<std::size_t>(x - out.window.x_min)] = 2;
    for (Site x : lower.states[i].sites.sites()) v[static_cast<std::size_t>(x - out.window.x_min)] = 1;
    out.values.push_back(std::move(v));
  }
  return out;
}

ChiTrajectory chi_direct(const HarrisEvents& h, std::span<const std::uint8_t> init,
                         std::span<const Time> times) {
  const Window& w = h.window();
  validate_times(w, times);
  if (init.size() != static_cast<std::size_t>(w.width())) {
    throw InvalidArgument("chi_direct: initial state does not match the window");
  }
  std::vector<std::uint8_t> state(init.begin(), init.end());
  for (auto v : state) {
    if (v > 2) throw InvalidArgument("chi_direct: values must be 0, 1 or 2");
  }
  ChiTrajectory out;
  out.window = w;
  out.times.assign(times.begin(), times.end());
  const auto events = h.events();
  std::size_t k = 0;
  for (Time t : times) {
    for (; k < events.size() && events[k].time <= t; ++k) {
      const Event& e = events[k];
      auto& to = state[static_cast<std::size_t>(e.to - w.x_min)];
      if (e.is_death()) {
        to = 0;
        continue;
      }
      const auto from = state[static_cast<std::size_t>(e.from - w.x_min)];
      if (from == 1) {
        to = 1;
      } else if (from == 2 && to == 0) {
        to = 2;
      }
    }
    out.values.push_back(state);
  }
  return out;
}

Site chi_first_two(const ChiTrajectory& chi, std::size_t i) {
  for (Site x = chi.window.x_min; x <= chi.window.x_max; ++x) {
    if (chi.at(i, x) == 2) return x;
  }
  return chi.window.x_max + 1;
}

}  // namespace cpi
