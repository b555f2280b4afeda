#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cpi/graphical/harris.hpp"

namespace cpi {

/// r_t of eta^{(-inf,0]}, l_t = least site where eta^{(-inf,0]} and eta^{1}
/// disagree, rho = r - l and its positive and negative parts.
///
/// A sample is contaminated when the influence of the left window edge
/// reaches min(l, r), the influence of the right edge reaches l, no
/// disagreement is found inside the window, or the lower process has entered
/// the right edge band by then.
struct InterfaceSeries {
  std::vector<Time> times;
  std::vector<Site> r;
  std::vector<Site> l;
  std::vector<Site> rho;
  std::vector<Site> rho_plus;
  std::vector<Site> rho_minus;
  std::vector<bool> contaminated;

  [[nodiscard]] bool any_contaminated() const;
};

InterfaceSeries interface_series(const HarrisEvents& h, std::span<const Time> times);

inline constexpr const char* kInterfaceCsvHeader = "time,r,l,rho,rho_plus,rho_minus,contaminated";

/// CSV with a leading "# cpi-interface v1" comment line.
void write_interface_csv(std::ostream& out, const InterfaceSeries& s);

}  // namespace cpi
