#include "cpi/graphical/reach.hpp"

#include <algorithm>
#include <sstream>

namespace cpi {

Sweep::Sweep(const HarrisEvents& h, std::span<const ChannelSpec> channels)
    : window_(h.window()),
      origin_(h.origin()),
      offset_(std::int64_t{h.origin().site} - h.raw_window().x_min),
      n_channels_(static_cast<int>(channels.size())) {
  if (channels.empty() || channels.size() > kMaxChannels) {
    throw InvalidArgument("sweep: need between 1 and 64 channels");
  }
  const auto width = static_cast<std::size_t>(window_.width());
  state_.assign(width, 0);
  pinned_.assign(width, 0);
  allowed_.assign(width, 0);

  Time start = kInfiniteTime;
  for (int c = 0; c < n_channels_; ++c) {
    const ChannelSpec& spec = channels[static_cast<std::size_t>(c)];
    const std::uint64_t bit = 1ULL << c;
    if (spec.inside) {
      const SiteSet clipped = spec.inside->intersect(window_.sites());
      for (const auto& iv : clipped.intervals()) {
        for (Site x = iv.lo; x <= iv.hi; ++x) allowed_[index(x)] |= bit;
      }
    } else {
      for (auto& a : allowed_) a |= bit;
    }
    for (const RegionBlock& b : spec.sources.blocks()) {
      if (b.sites.lo < window_.x_min || b.sites.hi > window_.x_max) {
        std::ostringstream os;
        os << "sweep: source sites [" << b.sites.lo << ", " << b.sites.hi << "] outside window ["
           << window_.x_min << ", " << window_.x_max << "]";
        throw WindowError(os.str());
      }
      if (!(b.from >= 0.0) || b.from > window_.t_max) {
        throw WindowError("sweep: source time outside [0, t_max]");
      }
      const Time to = std::min(b.to, window_.t_max);
      const std::size_t id = pins_.size() / 2;
      pins_.push_back(Pin{b.from + origin_.time, true, index(b.sites.lo), index(b.sites.hi), bit, id});
      pins_.push_back(Pin{to + origin_.time, false, index(b.sites.lo), index(b.sites.hi), bit, id});
      start = std::min(start, b.from);
    }
  }
  std::stable_sort(pins_.begin(), pins_.end(), [](const Pin& a, const Pin& b) {
    if (a.raw_time != b.raw_time) return a.raw_time < b.raw_time;
    return a.activate && !b.activate;
  });

  auto all = h.raw_events();
  if (start == kInfiniteTime) {
    events_ = all.subspan(all.size());
    now_ = 0.0;
    return;
  }
  const Time raw_start = start + origin_.time;
  auto first = std::lower_bound(all.begin(), all.end(), raw_start,
                                [](const Event& e, Time t) { return e.time < t; });
  events_ = all.subspan(static_cast<std::size_t>(first - all.begin()));
  now_ = start;
}

void Sweep::apply_pin(std::size_t k) {
  const Pin& p = pins_[k];
  if (p.activate) {
    for (std::size_t i = p.lo; i <= p.hi; ++i) {
      const std::uint64_t b = p.bit & allowed_[i];
      pinned_[i] |= b;
      state_[i] |= b;
    }
    active_.push_back(k);
    return;
  }
  std::erase_if(active_, [&](std::size_t a) { return pins_[a].block == p.block; });
  for (std::size_t i = p.lo; i <= p.hi; ++i) pinned_[i] &= ~p.bit;
  // Blocks of one channel may overlap; keep sites that another block still pins.
  for (std::size_t idx : active_) {
    const Pin& a = pins_[idx];
    if (a.bit != p.bit || a.hi < p.lo || a.lo > p.hi) continue;
    for (std::size_t i = std::max(a.lo, p.lo); i <= std::min(a.hi, p.hi); ++i) {
      pinned_[i] |= a.bit & allowed_[i];
    }
  }
}

std::vector<Site> Sweep::reached_sites(int channel) const {
  std::vector<Site> out;
  const std::uint64_t bit = 1ULL << channel;
  for (Site x = window_.x_min; x <= window_.x_max; ++x) {
    if (state_[index(x)] & bit) out.push_back(x);
  }
  return out;
}

std::optional<Site> Sweep::rightmost(int channel) const {
  return rightmost_at_or_below(channel, window_.x_max);
}

std::optional<Site> Sweep::rightmost_at_or_below(int channel, Site from) const {
  const std::uint64_t bit = 1ULL << channel;
  for (Site x = std::min(from, window_.x_max); x >= window_.x_min; --x) {
    if (state_[index(x)] & bit) return x;
  }
  return std::nullopt;
}

std::optional<Site> Sweep::leftmost(int channel) const {
  return leftmost_at_or_above(channel, window_.x_min);
}

std::optional<Site> Sweep::leftmost_at_or_above(int channel, Site from) const {
  const std::uint64_t bit = 1ULL << channel;
  for (Site x = std::max(from, window_.x_min); x <= window_.x_max; ++x) {
    if (state_[index(x)] & bit) return x;
  }
  return std::nullopt;
}

ReachMap forward_closure(const HarrisEvents& h, const SpaceTimeRegion& sources,
                         std::span<const Time> query_times, const std::optional<SiteSet>& inside) {
  for (std::size_t i = 0; i < query_times.size(); ++i) {
    const Time t = query_times[i];
    if (!(t >= 0.0) || t > h.window().t_max) {
      throw WindowError("forward_closure: query time outside [0, t_max]");
    }
    if (i > 0 && t < query_times[i - 1]) {
      throw InvalidArgument("forward_closure: query times must be nondecreasing");
    }
  }
  if (!query_times.empty() && !sources.empty() && query_times.front() < sources.earliest()) {
    throw InvalidArgument("forward_closure: query time precedes every source");
  }
  const ChannelSpec spec{sources, inside};
  Sweep sweep(h, std::span<const ChannelSpec>(&spec, 1));
  ReachMap out;
  out.inside = inside;
  for (Time t : query_times) {
    sweep.advance_to(t);
    auto sites = sweep.reached_sites(0);
    out.times.push_back(t);
    out.reached.push_back(SiteSet::from_sites(sites));
  }
  return out;
}

bool connects(const HarrisEvents& h, SpaceTimePoint from, SpaceTimePoint to,
              const std::optional<SiteSet>& inside) {
  if (to.time < from.time) throw InvalidArgument("connects: paths are time-directed (to.time < from.time)");
  if (!h.window().contains(from) || !h.window().contains(to)) {
    throw WindowError("connects: point outside window");
  }
  if (inside && (!inside->contains(from.site) || !inside->contains(to.site))) return false;
  if (to.time == from.time) return from.site == to.site;
  const ChannelSpec spec{SpaceTimeRegion::point(from), inside};
  Sweep sweep(h, std::span<const ChannelSpec>(&spec, 1));
  sweep.advance_to(to.time);
  return sweep.reached(0, to.site);
}

}  // namespace cpi
