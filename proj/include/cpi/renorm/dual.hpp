#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpi/graphical/harris.hpp"
#include "cpi/graphical/region.hpp"

namespace cpi {

/// Backward reachability for up to 64 target points at once.
///
/// For each target (z, s) the dual set D is the set of sites whose infection
/// at the current (decreasing) time would reach (z, s). Events are undone in
/// reverse order down to `floor`: an arrow x -> y adds x to D when y is in D,
/// a death at x removes x. Deaths at exactly `floor` are skipped because
/// sources at that instant survive them.
struct DualResult {
  std::vector<std::uint64_t> at_floor;  // per window site: targets whose D contains it at `floor`
  std::uint64_t touched = 0;            // targets whose D met `band` at some time in [floor, s]
  Site x_min = 0;

  [[nodiscard]] std::uint64_t bits_at(Site x) const { return at_floor[static_cast<std::size_t>(x - x_min)]; }
  /// Targets whose D at `floor` meets `sites`.
  [[nodiscard]] std::uint64_t meets(const SiteSet& sites) const;
};

DualResult dual_sweep(const HarrisEvents& h, std::span<const SpaceTimePoint> targets, Time floor,
                      const SiteSet& band = {});

}  // namespace cpi
