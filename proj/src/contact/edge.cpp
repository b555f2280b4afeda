#include "cpi/contact/edge.hpp"

#include <algorithm>

#include "cpi/graphical/reach.hpp"

namespace cpi {

EdgeSeries edge_series(const Trajectory& tr) {
  EdgeSeries e;
  e.times = tr.times;
  for (const auto& s : tr.states) {
    e.values.push_back(s.sites.empty() ? kNoEdge : s.sites.intervals().back().hi);
  }
  return e;
}

EdgePath edge_path(const HarrisEvents& h, Time T) {
  const Window& w = h.window();
  if (!(T >= 0.0) || T > w.t_max) throw WindowError("edge_path: T outside [0, t_max]");
  if (w.x_min > 0 || w.x_max < 0) throw WindowError("edge_path: window must contain site 0");
  const int m = h.kernel().range();
  const SiteInterval left{w.x_min, std::min(w.x_max, w.x_min + m - 1)};
  const Site right_lo = std::max(w.x_min, w.x_max - m + 1);

  const ChannelSpec specs[] = {
      {SpaceTimeRegion::at_time(SiteSet{{w.x_min, 0}}, 0.0), std::nullopt},
      {SpaceTimeRegion::band(SiteSet::from_interval(left), 0.0, T), std::nullopt},
  };
  Sweep sweep(h, specs);

  EdgePath out;
  Site r = 0;
  Site fl = left.hi;
  bool dead = false;
  out.series.times.push_back(0.0);
  out.series.values.push_back(r);
  if (fl >= r || right_lo <= r) out.contaminated = true;

  sweep.advance_to(T, [&](const Event& e, std::uint64_t, const Sweep& sw) {
    const std::uint64_t now = sw.mask(e.to);
    const Site before = r;
    if (e.is_arrow()) {
      if ((now & 1ULL) && (dead || e.to > r)) {
        r = e.to;
        dead = false;
      }
      if ((now & 2ULL) && e.to > fl) fl = e.to;
    } else {
      if (!dead && e.to == r && !(now & 1ULL)) {
        const auto next = sw.rightmost_at_or_below(0, r);
        if (next) {
          r = *next;
        } else {
          dead = true;
        }
      }
      if (e.to == fl && !(now & 2ULL)) fl = sw.rightmost_at_or_below(1, fl).value_or(left.hi);
    }
    if (dead || fl >= r || r >= right_lo) out.contaminated = true;
    if (r != before || (dead && out.series.values.back() != kNoEdge)) {
      out.series.times.push_back(e.time);
      out.series.values.push_back(dead ? kNoEdge : r);
    }
  });
  return out;
}

EdgeSeries running_max_edge(const EdgeSeries& e) {
  EdgeSeries out;
  out.times = e.times;
  Site best = kNoEdge;
  for (Site v : e.values) {
    if (v != kNoEdge) best = std::max(best, v);
    out.values.push_back(best);
  }
  return out;
}

bool is_gamma_slow(const EdgeSeries& path, double gamma, Time T) {
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    if (path.times[i] > T) break;
    const Site v = path.values[i];
    if (v != kNoEdge && static_cast<double>(v) > gamma * path.times[i]) return false;
  }
  return true;
}

bool is_gamma_slow(const HarrisEvents& h, double gamma, Time T) {
  const EdgePath p = edge_path(h, T);
  if (p.contaminated) throw ContaminationError("is_gamma_slow: window too small for the edge up to T");
  return is_gamma_slow(p.series, gamma, T);
}

bool right_path_inside_event(const HarrisEvents& h, Site L, Time T, bool strict) {
  const Window& w = h.window();
  const Site lo = strict ? 1 : 0;
  if (L < lo) throw InvalidArgument("right_path_inside_event: L below the left boundary");
  if (w.x_min > lo || w.x_max <= L) throw WindowError("right_path_inside_event: window must cover [0, L]");
  if (!(T >= 0.0) || T > w.t_max) throw WindowError("right_path_inside_event: T outside [0, t_max]");
  const int m = h.kernel().range();
  const SiteSet inside{{lo, w.x_max}};
  const SiteInterval band{std::max(lo, w.x_max - m + 1), w.x_max};
  const ChannelSpec specs[] = {
      {SpaceTimeRegion::at_time(inside, 0.0), inside},
      {SpaceTimeRegion::band(SiteSet::from_interval(band), 0.0, T), inside},
  };
  Sweep sweep(h, specs);
  sweep.advance_to(T);
  bool hit = false;
  bool influenced = false;
  for (Site x = lo; x <= L; ++x) {
    hit |= sweep.reached(0, x);
    influenced |= sweep.reached(1, x);
  }
  if (!hit && influenced) {
    throw ContaminationError("right_path_inside_event: right window edge influences the target");
  }
  return hit;
}

}  // namespace cpi
