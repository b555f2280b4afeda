#pragma once

#include "cpi/graphical/harris.hpp"
#include "cpi/graphical/region.hpp"

namespace cpi {

/// Set of infected sites inside a window. `left_filled` / `right_filled` mark
/// a half-infinite tail that the window clips: the true configuration also
/// contains every site left of x_min (right of x_max).
struct Configuration {
  SiteSet sites;
  bool left_filled = false;
  bool right_filled = false;

  static Configuration finite(SiteSet sites) { return {std::move(sites), false, false}; }
  /// (-inf, a] clipped to the window.
  static Configuration left_half_line(Site a, const Window& w);
  /// [b, inf) clipped to the window.
  static Configuration right_half_line(Site b, const Window& w);
  /// All of Z clipped to the window.
  static Configuration all(const Window& w);

  [[nodiscard]] bool contains(Site x) const { return sites.contains(x); }
  [[nodiscard]] bool empty() const { return sites.empty() && !left_filled && !right_filled; }

  /// Throws unless every site lies in the window and tail flags touch its edges.
  void validate(const Window& w) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

}  // namespace cpi
