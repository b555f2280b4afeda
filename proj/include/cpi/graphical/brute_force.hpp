#pragma once

#include <cstddef>
#include <optional>

#include "cpi/core.hpp"
#include "cpi/graphical/harris.hpp"
#include "cpi/graphical/region.hpp"

namespace cpi {

inline constexpr std::size_t kDefaultOracleCap = 20;

/// Test oracle: decides (from) <-> (to) by enumerating every sequence of
/// arrows a path could follow, checking deaths segment by segment.
///
/// Simultaneous events are taken in event_before() order and a death at the
/// start instant does not kill the start point, matching Sweep exactly.
/// Refuses constructions with more than `cap` events.
bool brute_force_connects(const HarrisEvents& h, SpaceTimePoint from, SpaceTimePoint to,
                          const std::optional<SiteSet>& inside = std::nullopt,
                          std::size_t cap = kDefaultOracleCap);

}  // namespace cpi
