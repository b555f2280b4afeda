#include "cpi/graphical/region.hpp"

#include <algorithm>
#include <cmath>

namespace cpi {

SiteSet::SiteSet(std::initializer_list<SiteInterval> intervals) {
  for (const auto& iv : intervals) add(iv);
}

SiteSet SiteSet::from_interval(SiteInterval iv) {
  SiteSet s;
  s.add(iv);
  return s;
}

SiteSet SiteSet::from_sites(std::span<const Site> sites) {
  std::vector<Site> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end());
  SiteSet s;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] <= sorted[j] + 1) ++j;
    s.intervals_.push_back({sorted[i], sorted[j]});
    i = j + 1;
  }
  return s;
}

bool SiteSet::contains(Site x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](Site v, const SiteInterval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->contains(x);
}

std::int64_t SiteSet::size() const {
  std::int64_t n = 0;
  for (const auto& iv : intervals_) n += iv.size();
  return n;
}

std::vector<Site> SiteSet::sites() const {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (const auto& iv : intervals_) {
    for (Site x = iv.lo; x <= iv.hi; ++x) out.push_back(x);
  }
  return out;
}

void SiteSet::add(SiteInterval iv) {
  if (iv.empty()) return;
  std::vector<SiteInterval> merged;
  merged.reserve(intervals_.size() + 1);
  bool placed = false;
  for (const auto& cur : intervals_) {
    if (std::int64_t{cur.hi} + 1 < iv.lo) {
      merged.push_back(cur);
    } else if (std::int64_t{iv.hi} + 1 < cur.lo) {
      if (!placed) {
        merged.push_back(iv);
        placed = true;
      }
      merged.push_back(cur);
    } else {
      iv.lo = std::min(iv.lo, cur.lo);
      iv.hi = std::max(iv.hi, cur.hi);
    }
  }
  if (!placed) merged.push_back(iv);
  intervals_ = std::move(merged);
}

SiteSet SiteSet::complement_within(SiteInterval universe) const {
  SiteSet out;
  Site next = universe.lo;
  for (const auto& iv : intervals_) {
    if (iv.hi < universe.lo || iv.lo > universe.hi) continue;
    if (iv.lo > next) out.intervals_.push_back({next, iv.lo - 1});
    next = std::max(next, iv.hi + 1);
  }
  if (next <= universe.hi) out.intervals_.push_back({next, universe.hi});
  return out;
}

SiteSet SiteSet::intersect(SiteInterval universe) const {
  SiteSet out;
  for (const auto& iv : intervals_) {
    SiteInterval c{std::max(iv.lo, universe.lo), std::min(iv.hi, universe.hi)};
    if (!c.empty()) out.intervals_.push_back(c);
  }
  return out;
}

bool SiteSet::subset_of(SiteInterval universe) const {
  return empty() || (intervals_.front().lo >= universe.lo && intervals_.back().hi <= universe.hi);
}

SpaceTimeRegion SpaceTimeRegion::point(SpaceTimePoint p) {
  SpaceTimeRegion r;
  r.add({p.site, p.site}, p.time, p.time);
  return r;
}

SpaceTimeRegion SpaceTimeRegion::at_time(const SiteSet& sites, Time t) {
  return band(sites, t, t);
}

SpaceTimeRegion SpaceTimeRegion::band(const SiteSet& sites, Time from, Time to) {
  SpaceTimeRegion r;
  for (const auto& iv : sites.intervals()) r.add(iv, from, to);
  return r;
}

SpaceTimeRegion& SpaceTimeRegion::add(SiteInterval sites, Time from, Time to) {
  if (!(from <= to) || std::isnan(from)) throw InvalidArgument("region: block with from > to");
  if (!sites.empty()) blocks_.push_back({sites, from, to});
  return *this;
}

bool SpaceTimeRegion::contains(SpaceTimePoint p) const {
  return std::any_of(blocks_.begin(), blocks_.end(), [&](const RegionBlock& b) {
    return b.sites.contains(p.site) && b.from <= p.time && p.time <= b.to;
  });
}

Time SpaceTimeRegion::earliest() const {
  Time t = kInfiniteTime;
  for (const auto& b : blocks_) t = std::min(t, b.from);
  return t;
}

}  // namespace cpi
