#pragma once

#include <iosfwd>
#include <string>

#include "cpi/graphical/harris.hpp"

namespace cpi {

// Line format:
//   # cpi-events v1
//   seed <u64>
//   lambda <f>
//   kernel <one-sided weights csv>
//   window <x_min> <x_max> <t_max>
//   origin <site> <time>
//   D x t
//   A x y t
// Events are in sampled (unshifted) coordinates; times use %.17g.

void write_events(std::ostream& out, const HarrisEvents& h);
HarrisEvents read_events(std::istream& in);

void dump_events(const std::string& path, const HarrisEvents& h);
HarrisEvents load_events(const std::string& path);

}  // namespace cpi
