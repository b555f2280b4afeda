#pragma once

#include <random>
#include <vector>

#include "cpi/graphical/harris.hpp"

namespace cpi::testing {

// Small random constructions for oracle comparisons: `sites` sites starting at
// 0, up to `max_events` deaths/arrows with uniform times on [0, t_max].
inline HarrisEvents random_small(std::mt19937_64& rng, int sites, int max_events, Time t_max,
                                 int range = 1) {
  const Kernel kernel = Kernel::uniform(1.0, range);
  const Window w = Window::make(0, sites - 1, t_max);
  std::uniform_int_distribution<int> count(0, max_events);
  std::uniform_int_distribution<int> site(0, sites - 1);
  std::uniform_int_distribution<int> disp(-range, range);
  std::uniform_real_distribution<double> time(0.0, t_max);
  std::bernoulli_distribution death(0.4);
  std::vector<Event> ev;
  const int n = count(rng);
  while (static_cast<int>(ev.size()) < n) {
    const Site x = site(rng);
    const Time t = time(rng);
    if (death(rng)) {
      ev.push_back({t, x, x});
      continue;
    }
    const int d = disp(rng);
    if (d == 0 || !w.contains_site(x + d)) continue;
    ev.push_back({t, x, x + d});
  }
  return HarrisEvents::from_events(kernel, w, std::move(ev));
}

}  // namespace cpi::testing
