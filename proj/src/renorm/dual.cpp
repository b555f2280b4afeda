#include "cpi/renorm/dual.hpp"

#include <algorithm>
#include <numeric>

namespace cpi {

std::uint64_t DualResult::meets(const SiteSet& sites) const {
  std::uint64_t out = 0;
  const Site x_max = x_min + static_cast<Site>(at_floor.size()) - 1;
  for (const auto& iv : sites.intervals()) {
    for (Site x = std::max(iv.lo, x_min); x <= std::min(iv.hi, x_max); ++x) out |= bits_at(x);
  }
  return out;
}

DualResult dual_sweep(const HarrisEvents& h, std::span<const SpaceTimePoint> targets, Time floor,
                      const SiteSet& band) {
  if (targets.size() > 64) throw InvalidArgument("dual_sweep: at most 64 targets");
  const Window& w = h.window();
  DualResult out;
  out.x_min = w.x_min;
  out.at_floor.assign(static_cast<std::size_t>(w.width()), 0);
  std::vector<std::uint8_t> in_band(static_cast<std::size_t>(w.width()), 0);
  for (const auto& iv : band.intersect(w.sites()).intervals()) {
    for (Site x = iv.lo; x <= iv.hi; ++x) in_band[static_cast<std::size_t>(x - w.x_min)] = 1;
  }
  for (const auto& t : targets) {
    if (!w.contains(t)) throw WindowError("dual_sweep: target outside window");
    if (t.time < floor) throw InvalidArgument("dual_sweep: target below floor");
  }
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return targets[a].time > targets[b].time; });

  auto& d = out.at_floor;
  auto idx = [&](Site x) { return static_cast<std::size_t>(x - w.x_min); };
  std::size_t next = 0;
  auto activate_down_to = [&](Time t) {
    for (; next < order.size() && targets[order[next]].time >= t; ++next) {
      const auto& p = targets[order[next]];
      const std::uint64_t bit = 1ULL << order[next];
      d[idx(p.site)] |= bit;
      if (in_band[idx(p.site)]) out.touched |= bit;
    }
  };

  const auto ev = h.raw_events();
  const Origin o = h.origin();
  const Time top = targets.empty() ? floor : targets[order.front()].time;
  auto it = std::upper_bound(ev.begin(), ev.end(), top + o.time,
                             [](Time t, const Event& e) { return t < e.time; });
  while (it != ev.begin()) {
    const Event& raw = *--it;
    const Event e{raw.time - o.time, raw.from - o.site, raw.to - o.site};
    if (e.time < floor) break;
    activate_down_to(e.time);
    if (e.is_death()) {
      if (e.time > floor) d[idx(e.from)] = 0;
      continue;
    }
    const std::uint64_t carry = d[idx(e.to)];
    if (!carry) continue;
    d[idx(e.from)] |= carry;
    if (in_band[idx(e.from)]) out.touched |= carry;
  }
  activate_down_to(floor);
  return out;
}

}  // namespace cpi
