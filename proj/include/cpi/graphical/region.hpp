#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "cpi/core.hpp"

namespace cpi {

/// Finite set of sites kept as sorted, disjoint, non-adjacent closed intervals.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<SiteInterval> intervals);

  static SiteSet from_interval(SiteInterval iv);
  static SiteSet from_sites(std::span<const Site> sites);

  [[nodiscard]] bool contains(Site x) const;
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] std::int64_t size() const;
  [[nodiscard]] const std::vector<SiteInterval>& intervals() const& { return intervals_; }
  [[nodiscard]] std::vector<SiteInterval> intervals() && { return std::move(intervals_); }
  [[nodiscard]] std::vector<Site> sites() const;

  void add(SiteInterval iv);
  [[nodiscard]] SiteSet complement_within(SiteInterval universe) const;
  [[nodiscard]] SiteSet intersect(SiteInterval iv) const;
  [[nodiscard]] bool subset_of(SiteInterval iv) const;

  friend bool operator==(const SiteSet&, const SiteSet&) = default;

 private:
  std::vector<SiteInterval> intervals_;
};

/// Block of a space-time region: every site of `sites` at every time in [from, to].
struct RegionBlock {
  SiteInterval sites;
  Time from = 0.0;
  Time to = 0.0;
};

/// Finite union of (site interval x closed time interval) blocks, used as the
/// source set of reachability queries. A point source is a block with
/// from == to.
class SpaceTimeRegion {
 public:
  SpaceTimeRegion() = default;

  static SpaceTimeRegion point(SpaceTimePoint p);
  static SpaceTimeRegion at_time(const SiteSet& sites, Time t);
  static SpaceTimeRegion band(const SiteSet& sites, Time from, Time to);

  SpaceTimeRegion& add(SiteInterval sites, Time from, Time to);
  SpaceTimeRegion& add(const RegionBlock& b) { return add(b.sites, b.from, b.to); }

  [[nodiscard]] const std::vector<RegionBlock>& blocks() const { return blocks_; }
  [[nodiscard]] bool empty() const { return blocks_.empty(); }
  [[nodiscard]] bool contains(SpaceTimePoint p) const;
  /// Earliest time of any block; +inf for an empty region.
  [[nodiscard]] Time earliest() const;

 private:
  std::vector<RegionBlock> blocks_;
};

}  // namespace cpi
