#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpi/core.hpp"
#include "cpi/graphical/harris.hpp"
#include "cpi/graphical/region.hpp"

namespace cpi {

/// One reachability channel: a source region and an optional restriction set
/// ("inside C"). Coordinates are those of the HarrisEvents view.
struct ChannelSpec {
  SpaceTimeRegion sources;
  std::optional<SiteSet> inside;
};

/// Time-ordered forward sweep computing, for up to 64 channels at once, the
/// set of sites reached from each channel's sources.
///
/// Per site the engine keeps a bitmask of reached channels. An arrow x -> y
/// ORs the mask of x into y (restricted to channels allowed at y); a death at
/// x resets x to the channels currently pinned there. A site is pinned for a
/// channel while (site, now) lies in that channel's source region.
///
/// Ordering at one instant: source activations, deaths, arrows, source
/// deactivations. Ties between Poisson events follow event_before().
class Sweep {
 public:
  static constexpr int kMaxChannels = 64;

  Sweep(const HarrisEvents& h, std::span<const ChannelSpec> channels);

  /// Processes every event with time <= t (view coordinates).
  void advance_to(Time t) {
    advance_to(t, [](const Event&, std::uint64_t, const Sweep&) {});
  }

  /// As above; `visit(event, mask_before, sweep)` runs after each Poisson
  /// event, with the event in view coordinates and the mask its target site
  /// (arrow head or death site) had before the event.
  template <class Visitor>
  void advance_to(Time t, Visitor&& visit);

  [[nodiscard]] Time now() const { return now_; }
  [[nodiscard]] int channels() const { return n_channels_; }
  [[nodiscard]] const Window& window() const { return window_; }

  [[nodiscard]] std::uint64_t mask(Site x) const { return state_[index(x)]; }
  [[nodiscard]] bool reached(int channel, Site x) const {
    return (mask(x) >> channel) & 1ULL;
  }
  [[nodiscard]] std::vector<Site> reached_sites(int channel) const;
  [[nodiscard]] std::optional<Site> rightmost(int channel) const;
  [[nodiscard]] std::optional<Site> leftmost(int channel) const;
  /// Rightmost reached site of `channel` at or left of `from`.
  [[nodiscard]] std::optional<Site> rightmost_at_or_below(int channel, Site from) const;
  /// Leftmost reached site of `channel` at or right of `from`.
  [[nodiscard]] std::optional<Site> leftmost_at_or_above(int channel, Site from) const;

  [[nodiscard]] bool in_window(Site x) const { return window_.contains_site(x); }

 private:
  struct Pin {
    Time raw_time;
    bool activate;
    std::size_t lo;  // state index range
    std::size_t hi;
    std::uint64_t bit;
    std::size_t block;
  };

  [[nodiscard]] std::size_t index(Site x) const {
    return static_cast<std::size_t>(static_cast<std::int64_t>(x) + offset_);
  }
  void apply_pin(std::size_t k);

  Window window_;        // view coordinates
  Origin origin_;        // view origin in raw coordinates
  std::int64_t offset_;  // view site -> state index
  int n_channels_ = 0;
  std::span<const Event> events_;  // raw, sorted
  std::size_t next_event_ = 0;
  std::vector<Pin> pins_;
  std::size_t next_pin_ = 0;
  std::vector<std::size_t> active_;  // indices of activated, not yet deactivated pins
  std::vector<std::uint64_t> state_;
  std::vector<std::uint64_t> pinned_;
  std::vector<std::uint64_t> allowed_;
  Time now_ = 0.0;
};

template <class Visitor>
void Sweep::advance_to(Time t, Visitor&& visit) {
  if (t > window_.t_max) throw WindowError("sweep: query time beyond t_max");
  const Time limit = t + origin_.time;
  while (true) {
    const bool have_event = next_event_ < events_.size() && events_[next_event_].time <= limit;
    const bool have_pin = next_pin_ < pins_.size() && pins_[next_pin_].raw_time <= limit;
    if (!have_event && !have_pin) break;
    if (have_pin) {
      const Pin& p = pins_[next_pin_];
      const bool pin_first = !have_event || (p.activate ? p.raw_time <= events_[next_event_].time
                                                        : p.raw_time < events_[next_event_].time);
      if (pin_first) {
        apply_pin(next_pin_++);
        continue;
      }
    }
    const Event& e = events_[next_event_++];
    const std::size_t to = index(e.to - origin_.site);
    const std::uint64_t before = state_[to];
    if (e.is_death()) {
      state_[to] = pinned_[to];
    } else {
      state_[to] |= state_[index(e.from - origin_.site)] & allowed_[to];
    }
    visit(Event{e.time - origin_.time, e.from - origin_.site, e.to - origin_.site}, before, *this);
  }
  now_ = t;
}

/// Reached sets per query time for one source region.
struct ReachMap {
  std::vector<Time> times;
  std::vector<SiteSet> reached;
  std::optional<SiteSet> inside;

  [[nodiscard]] const SiteSet& at(std::size_t i) const { return reached.at(i); }
};

/// {y : sources <-> (y, t)} (inside C when given) for each query time, via a
/// single sweep. Query times must be nondecreasing and not precede the
/// earliest source time.
ReachMap forward_closure(const HarrisEvents& h, const SpaceTimeRegion& sources,
                         std::span<const Time> query_times,
                         const std::optional<SiteSet>& inside = std::nullopt);

/// (from) <-> (to), optionally inside C.
bool connects(const HarrisEvents& h, SpaceTimePoint from, SpaceTimePoint to,
              const std::optional<SiteSet>& inside = std::nullopt);

}  // namespace cpi
