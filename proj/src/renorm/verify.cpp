#include "cpi/renorm/verify.hpp"

#include <algorithm>
#include <sstream>

#include "cpi/renorm/dual.hpp"

namespace cpi {

CellVerifier::CellVerifier(const HarrisEvents& h, BlockParams params, LambdaWindow lw, std::size_t oracle_cap)
    : h_(h), params_(params), lw_(lw), brute_(h.size() <= oracle_cap) {
  check_coverage(h_, params_, lw_);
}

bool CellVerifier::occupied(Site x, Time t) {
  const auto key = std::make_pair(x, t);
  if (auto it = occupied_memo_.find(key); it != occupied_memo_.end()) return it->second;
  bool occ = false;
  const Window& w = h_.window();
  if (brute_) {
    for (Site y = w.x_min; y <= w.x_max && !occ; ++y) occ = brute_force_connects(h_, {y, 0.0}, {x, t});
  } else {
    const SpaceTimePoint target{x, t};
    occ = dual_sweep(h_, std::span<const SpaceTimePoint>(&target, 1), 0.0).meets(SiteSet::from_interval(w.sites())) != 0;
  }
  occupied_memo_[key] = occ;
  return occ;
}

std::vector<std::uint8_t> CellVerifier::occupied_span(SiteInterval span, Time t) {
  std::vector<std::uint8_t> out;
  if (brute_) {
    for (Site x = span.lo; x <= span.hi; ++x) out.push_back(occupied(x, t));
    return out;
  }
  const SiteSet all = SiteSet::from_interval(h_.window().sites());
  for (Site first = span.lo; first <= span.hi; first += 64) {
    std::vector<SpaceTimePoint> targets;
    for (Site x = first; x <= std::min<Site>(span.hi, first + 63); ++x) targets.push_back({x, t});
    const std::uint64_t hit = dual_sweep(h_, targets, 0.0).meets(all);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const bool occ = (hit >> i) & 1ULL;
      occupied_memo_[{targets[i].site, t}] = occ;
      out.push_back(occ);
    }
  }
  return out;
}

ConditionReport CellVerifier::verify(int m, int n) {
  if (!lw_.contains(m, n)) {
    std::ostringstream os;
    os << "verify_block_cell: cell (" << m << ", " << n << ") outside the Lambda window";
    throw WindowError(os.str());
  }
  if (auto it = memo_.find({m, n}); it != memo_.end()) return it->second;

  ConditionReport rep;
  rep.m = m;
  rep.n = n;
  rep.route = brute_ ? "brute-force" : "dual-sweep";
  if (!brute_) rep.note = "event count above the oracle cap; used the dual sweep";

  CellConditions& c = rep.conditions;
  auto parent_is_one = [&](int pm) { return lw_.contains(pm, n - 1) && verify(pm, n - 1).phi == 1; };
  c.parent = n == 0 || parent_is_one(m - 1) || parent_is_one(m + 1);

  const Time t0 = params_.level_time(n);
  const Time t1 = params_.level_time(n + 1);
  const Window& w = h_.window();
  const SiteInterval im = block_interval(params_, m);
  std::vector<Site> src_sites;
  const auto occ0 = occupied_span(im, t0);
  for (Site x = im.lo; x <= im.hi; ++x) {
    if (occ0[static_cast<std::size_t>(x - im.lo)]) src_sites.push_back(x);
  }
  const SiteSet source = SiteSet::from_sites(src_sites);
  const SiteSet outside = SiteSet::from_interval(im).complement_within(w.sites());

  // Vacancy and descent at KN(n+1).
  const SiteInterval span = neighbour_span(params_, m);
  const auto occ1 = occupied_span(span, t1);
  int run = 0;
  c.vacancy = true;
  for (auto o : occ1) {
    run = o ? 0 : run + 1;
    if (run >= params_.vacant_len) c.vacancy = false;
  }
  std::vector<SpaceTimePoint> descent_targets;
  for (Site y = span.lo; y <= span.hi; ++y) {
    if (occ1[static_cast<std::size_t>(y - span.lo)]) descent_targets.push_back({y, t1});
  }

  // Intrusion check points: slab start for every J site, then after every
  // event whose target lies in J.
  const Box j = block_box(params_, m, n);
  std::vector<SpaceTimePoint> checks;
  for (Site z = j.sites.lo; z <= j.sites.hi; ++z) checks.push_back({z, t0});
  for (const Event& e : h_.events()) {
    if (e.time > t0 && e.time <= t1 && j.sites.contains(e.to)) checks.push_back({e.to, e.time});
  }

  auto source_reaches = [&](SpaceTimePoint p) {
    for (Site x : source.sites()) {
      if (brute_force_connects(h_, {x, t0}, p)) return true;
    }
    return false;
  };
  auto outside_reaches = [&](SpaceTimePoint p) {
    std::vector<Time> starts{t0};
    for (const Event& e : h_.events()) {
      if (e.time > t0 && e.time <= p.time) starts.push_back(e.time);
    }
    for (Site x : outside.sites()) {
      for (Time u : starts) {
        if (brute_force_connects(h_, {x, u}, p)) return true;
      }
    }
    return false;
  };

  c.descent = true;
  c.intrusion = true;
  if (brute_) {
    for (const auto& p : descent_targets) c.descent = c.descent && source_reaches(p);
    for (const auto& p : checks) {
      if (!source_reaches(p) && outside_reaches(p)) c.intrusion = false;
    }
  } else {
    for (std::size_t first = 0; first < descent_targets.size(); first += 64) {
      const std::span<const SpaceTimePoint> batch(descent_targets.data() + first,
                                                  std::min<std::size_t>(64, descent_targets.size() - first));
      const std::uint64_t all = batch.size() == 64 ? ~0ULL : (1ULL << batch.size()) - 1;
      if (dual_sweep(h_, batch, t0).meets(source) != all) c.descent = false;
    }
    for (std::size_t first = 0; first < checks.size() && c.intrusion; first += 64) {
      const std::span<const SpaceTimePoint> batch(checks.data() + first,
                                                  std::min<std::size_t>(64, checks.size() - first));
      const DualResult d = dual_sweep(h_, batch, t0, outside);
      if (d.touched & ~d.meets(source)) c.intrusion = false;
    }
  }
  rep.phi = c.phi();
  memo_[{m, n}] = rep;
  return rep;
}

ConditionReport verify_block_cell(const HarrisEvents& h, const BlockParams& params, const LambdaWindow& lw,
                                  int m, int n) {
  CellVerifier v(h, params, lw);
  return v.verify(m, n);
}

}  // namespace cpi
