#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpi {

using Site = std::int32_t;
using Time = double;

inline constexpr Time kInfiniteTime = std::numeric_limits<Time>::infinity();

// Closed integer interval [lo, hi]; empty when lo > hi.
struct SiteInterval {
  Site lo = 0;
  Site hi = -1;

  [[nodiscard]] bool empty() const { return lo > hi; }
  [[nodiscard]] bool contains(Site x) const { return lo <= x && x <= hi; }
  [[nodiscard]] std::int64_t size() const { return empty() ? 0 : std::int64_t{hi} - lo + 1; }
  friend bool operator==(const SiteInterval&, const SiteInterval&) = default;
};

// A point of Z x [0, inf).
struct SpaceTimePoint {
  Site site = 0;
  Time time = 0.0;
  friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

/// Raised when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a query or construction needs data outside the sampled window.
class WindowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when a finite-window run may differ from the infinite-volume answer.
class ContaminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpi
