#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cpi/core.hpp"
#include "cpi/graphical/kernel.hpp"

namespace cpi {

/// Finite piece [x_min, x_max] x [0, t_max] of Z x [0, inf).
struct Window {
  Site x_min = 0;
  Site x_max = 0;
  Time t_max = 0.0;

  static Window make(Site x_min, Site x_max, Time t_max);

  [[nodiscard]] bool contains_site(Site x) const { return x_min <= x && x <= x_max; }
  [[nodiscard]] bool contains(SpaceTimePoint p) const {
    return contains_site(p.site) && p.time >= 0.0 && p.time <= t_max;
  }
  [[nodiscard]] std::int64_t width() const { return std::int64_t{x_max} - x_min + 1; }
  [[nodiscard]] SiteInterval sites() const { return {x_min, x_max}; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Default guard band ceil(lambda * M * t_max) + 4M added on each side of the
/// region of interest.
Site default_guard(const Kernel& kernel, Time t_max);

/// One Poisson event. A death at x has from == to == x; an arrow has from != to.
struct Event {
  Time time = 0.0;
  Site from = 0;
  Site to = 0;

  [[nodiscard]] bool is_death() const { return from == to; }
  [[nodiscard]] bool is_arrow() const { return from != to; }
  friend bool operator==(const Event&, const Event&) = default;
};

/// Total order used by every sweep: time, then deaths before arrows, then
/// source site, then displacement. Exact float ties are resolved by this rule.
bool event_before(const Event& a, const Event& b);

struct Origin {
  Site site = 0;
  Time time = 0.0;
  friend bool operator==(const Origin&, const Origin&) = default;
};

namespace detail {
struct EventStore {
  Kernel kernel;
  Window window;  // unshifted coordinates
  std::uint64_t seed = 0;
  std::vector<Event> events;  // unshifted, sorted by event_before
};
}  // namespace detail

/// A realization of the death and arrow processes on a finite window.
///
/// The event storage is immutable and shared; shifting only changes the
/// recorded origin, so H^{(x,t)} is O(1) and composes exactly.
class HarrisEvents {
 public:
  /// Builds from an explicit event list (fixtures, deserialization). Events are
  /// validated against the window and kernel, then sorted.
  static HarrisEvents from_events(Kernel kernel, Window window, std::vector<Event> events,
                                  std::uint64_t seed = 0);

  [[nodiscard]] const Kernel& kernel() const { return store_->kernel; }
  [[nodiscard]] std::uint64_t seed() const { return store_->seed; }
  /// Accumulated shift relative to the sampled coordinates.
  [[nodiscard]] Origin origin() const { return origin_; }
  /// Window in the (shifted) coordinates of this view.
  [[nodiscard]] const Window& window() const { return window_; }
  /// Window in sampled (unshifted) coordinates.
  [[nodiscard]] const Window& raw_window() const { return store_->window; }

  /// Events visible from this view, in raw (unshifted) coordinates, sorted.
  /// Shifted time of an event is `raw.time - origin().time`.
  [[nodiscard]] std::span<const Event> raw_events() const;

  /// Events of this view in shifted coordinates (copies).
  [[nodiscard]] std::vector<Event> events() const;
  [[nodiscard]] std::size_t size() const { return raw_events().size(); }

  /// Death times at site x, ascending (shifted coordinates).
  [[nodiscard]] std::vector<Time> deaths_at(Site x) const;
  /// Arrow times for the ordered pair (x, y), ascending (shifted coordinates).
  [[nodiscard]] std::vector<Time> arrows_between(Site x, Site y) const;

  /// Converts a time of this view to raw time.
  [[nodiscard]] Time to_raw(Time t) const { return t + origin_.time; }
  [[nodiscard]] Site to_raw_site(Site x) const { return x + origin_.site; }

  /// H^{(x,t)}: the site origin becomes x and the time origin becomes t.
  [[nodiscard]] HarrisEvents shifted(Site x, Time t) const;

 private:
  friend HarrisEvents sample_harris(const Kernel&, const Window&, std::uint64_t);
  HarrisEvents(std::shared_ptr<const detail::EventStore> store, Origin origin);

  std::shared_ptr<const detail::EventStore> store_;
  Origin origin_;
  Window window_;
  std::size_t first_visible_ = 0;  // first raw event with raw time >= origin.time
};

/// Samples every death stream (rate 1) and arrow stream (rate lambda p(y-x))
/// on the window. Deterministic in (kernel, window, seed); each stream is keyed
/// by (seed, kind, site, displacement), so the events inside a sub-window do
/// not depend on the enclosing window.
HarrisEvents sample_harris(const Kernel& kernel, const Window& window, std::uint64_t seed);

/// H^{(x,t)}; rejects t < 0 and t >= t_max of the view.
/// The single stream sample_harris draws for deaths at x (d == 0) or arrows
/// x -> x + d, as ascending times up to t_max.
std::vector<Time> sample_stream(const Kernel& kernel, std::uint64_t seed, Site x, int d, Time t_max);

HarrisEvents shift_events(const HarrisEvents& h, Site x, Time t);

/// Events of h that lie in `sub` (arrows need both endpoints inside), as a new
/// unshifted construction with the same seed.
HarrisEvents restrict_events(const HarrisEvents& h, const Window& sub);

}  // namespace cpi
