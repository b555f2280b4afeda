#include "cpi/renorm/expanding.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "cpi/graphical/reach.hpp"
#include "cpi/random.hpp"

namespace cpi {

LambdaWindow expanding_lambda_window(int horizon_i) { return {2 * horizon_i + 2, horizon_i, true}; }

int horizon_for(const BlockParams& params, Time T) {
  if (!(T > 1.0)) throw InvalidArgument("horizon_for: T must exceed 1");
  return static_cast<int>(std::ceil((T - 1.0) / params.slab()));
}

Window expanding_window_needed(const BlockParams& params, int horizon_i) {
  const SiteInterval s = required_sites(params, expanding_lambda_window(horizon_i));
  return {s.lo, s.hi, 1.0 + params.level_time(horizon_i + 1)};
}

namespace {

// (beta1): per target site y a channel with sources Z \ {y} at time 0, and
// channel 0 for the origin; after every event into y both must agree.
bool transmission_holds(const HarrisEvents& h, SiteInterval u) {
  const Window& w = h.window();
  for (Site first = u.lo; first <= u.hi; first += 63) {
    const Site last = std::min<Site>(u.hi, first + 62);
    std::vector<ChannelSpec> specs{{SpaceTimeRegion::point({0, 0.0}), std::nullopt}};
    for (Site y = first; y <= last; ++y) {
      SiteSet others = SiteSet::from_interval({w.x_min, y - 1});
      others.add({y + 1, w.x_max});
      specs.push_back({SpaceTimeRegion::at_time(others, 0.0), std::nullopt});
    }
    Sweep sweep(h, specs);
    bool ok = true;
    sweep.advance_to(1.0, [&](const Event& e, std::uint64_t, const Sweep& sw) {
      if (!ok || e.to < first || e.to > last) return;
      const std::uint64_t mk = sw.mask(e.to);
      const int ch = 1 + (e.to - first);
      if (((mk >> ch) & 1ULL) && !(mk & 1ULL)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

void local_conditions(const HarrisEvents& h, const BlockParams& params, ExpandReport& r, bool short_circuit) {
  const SiteInterval u{block_interval(params, -2).lo, block_interval(params, 2).hi};
  const Window& w = h.window();
  if (w.x_min > u.lo - params.M || w.x_max < u.hi + params.M || w.t_max < 1.0) {
    throw WindowError("beta-expanding: window does not cover I_{-2} u I_0 u I_2 up to time 1");
  }
  const auto deaths = h.deaths_at(0);
  r.cond_no_death = std::none_of(deaths.begin(), deaths.end(), [](Time t) { return t <= 1.0; });
  if (short_circuit && !r.cond_no_death) return;

  const std::vector<Time> one{1.0};
  const auto reach = forward_closure(h, SpaceTimeRegion::point({0, 0.0}), one);
  r.cond_full_descent = SiteSet::from_interval(u) == reach.at(0).intersect(u);
  if (short_circuit && !r.cond_full_descent) return;

  r.cond_transmission = transmission_holds(h, u);
}

}  // namespace

namespace {

// Times of one keyed stream, drawn on demand.
class LazyStream {
 public:
  LazyStream(const Kernel& k, std::uint64_t seed, Site x, int d)
      : rate_(d == 0 ? 1.0 : k.rate(d)),
        stream_(d == 0 ? stream_key(seed, StreamKind::kDeath, x) : stream_key(seed, StreamKind::kArrow, x, d)) {
    t_ = first_ = stream_.next_exponential(rate_);
  }
  [[nodiscard]] Time first() const { return first_; }
  // First time >= t.
  Time at_or_after(Time t) {
    while (t_ < t) t_ += stream_.next_exponential(rate_);
    return t_;
  }

 private:
  double rate_;
  CounterStream stream_;
  Time t_ = 0.0;
  Time first_ = 0.0;
};

struct SeedStreams {
  const Kernel& k;
  std::uint64_t seed;
  Time first(Site x, int d) const { return LazyStream(k, seed, x, d).first(); }
  Time at_or_after(Site x, int d, Time t) const { return LazyStream(k, seed, x, d).at_or_after(t); }
};

struct IndexStreams {
  const StreamIndex& idx;
  SpaceTimePoint at;
  Time at_or_after(Site x, int d, Time t) const { return idx.at_or_after(at.site + x, d, at.time + t) - at.time; }
  Time first(Site x, int d) const { return at_or_after(x, d, 0.0); }
};

// One side of the origin, dir = +1 or -1, out to |y| = reach.
template <class Streams>
bool side_possible(const Streams& st, int dir, int reach) {
  Time c = 0.0;  // no infection from the origin reaches y before c
  for (int j = 1; j <= reach; ++j) {
    const Site y = dir * j;
    const Site back = y - dir;
    const Site front = y + dir;
    if (j >= 2) {
      // an arrow back -> y before the origin is at back, from a back alive since 0
      const Time b = st.first(back, dir);
      if (b < c && b <= 1.0 && st.first(back, 0) > b) return false;
    }
    const Time cy = st.at_or_after(back, dir, c);
    // an arrow front -> y before the origin can be at y, from a front alive since 0
    const Time f = st.first(front, -dir);
    if (f <= 1.0 && f < cy && st.first(front, 0) > f) return false;
    if (cy > 1.0) return false;  // y is not reached by time 1
    c = cy;
  }
  return true;
}

template <class Streams>
bool prefilter(const Streams& st, const BlockParams& params) {
  if (st.first(0, 0) <= 1.0) return false;
  return side_possible(st, 1, block_interval(params, 2).hi) &&
         side_possible(st, -1, -block_interval(params, -2).lo);
}

bool nearest_neighbour(const Kernel& k) { return k.support() == std::vector<int>{-1, 1}; }

}  // namespace

bool expanding_prefilter(const Kernel& kernel, const BlockParams& params, std::uint64_t seed) {
  if (!nearest_neighbour(kernel)) return true;
  return prefilter(SeedStreams{kernel, seed}, params);
}

bool expanding_prefilter(const HarrisEvents& h, const BlockParams& params) {
  if (!nearest_neighbour(h.kernel())) return true;
  const StreamIndex idx(h);
  return prefilter(IndexStreams{idx, {0, 0.0}}, params);
}

bool expanding_prefilter(const StreamIndex& idx, const BlockParams& params, SpaceTimePoint at) {
  if (!idx.nearest_neighbour()) return true;
  return prefilter(IndexStreams{idx, at}, params);
}

StreamIndex::StreamIndex(const HarrisEvents& h) : nearest_(cpi::nearest_neighbour(h.kernel())) {
  for (const Event& e : h.events()) times_[key(e.from, e.to - e.from)].push_back(e.time);
}

Time StreamIndex::at_or_after(Site x, int d, Time t) const {
  const auto it = times_.find(key(x, d));
  if (it == times_.end()) return kInfiniteTime;
  const auto& v = it->second;
  const auto p = std::lower_bound(v.begin(), v.end(), t);
  return p == v.end() ? kInfiniteTime : *p;
}

ExpandReport expanding_local(const HarrisEvents& h, const BlockParams& params, bool short_circuit) {
  params.validate();
  ExpandReport r;
  local_conditions(h, params, r, short_circuit);
  return r;
}

ExpandReport is_beta_expanding(const HarrisEvents& h, const BlockParams& params, int horizon_i,
                               bool short_circuit) {
  params.validate();
  if (horizon_i < 0) throw InvalidArgument("is_beta_expanding: negative horizon");
  const Window need = expanding_window_needed(params, horizon_i);
  const Window& w = h.window();
  if (w.x_min > need.x_min || w.x_max < need.x_max || w.t_max < need.t_max) {
    throw WindowError("is_beta_expanding: window does not cover I_{+-(2i+3)} and time 1 + KN(i+1)");
  }
  ExpandReport r;
  r.horizon_i = horizon_i;
  local_conditions(h, params, r, short_circuit);
  const bool local = r.cond_no_death && r.cond_full_descent && r.cond_transmission;
  if (local || !short_circuit) {
    const HarrisEvents shifted = h.shifted(0, 1.0);
    BlockField f = block_field(shifted, params, expanding_lambda_window(horizon_i));
    r.gamma = gamma_event(f.psi_field(), params.beta, horizon_i);
    r.cond_percolation = r.gamma.holds;
    r.contaminated = f.contaminated;
    r.field = std::move(f);
    r.percolation_evaluated = true;
  }
  r.overall = local && r.cond_percolation;
  return r;
}

void write_expand_json(std::ostream& out, const ExpandReport& r) {
  nlohmann::ordered_json j{{"cond_transmission", r.cond_transmission},
                           {"cond_no_death", r.cond_no_death},
                           {"cond_full_descent", r.cond_full_descent},
                           {"cond_percolation", r.cond_percolation},
                           {"percolation_evaluated", r.percolation_evaluated},
                           {"horizon_i", r.horizon_i},
                           {"overall", r.overall},
                           {"contaminated", r.contaminated}};
  out << j.dump(2) << '\n';
}

}  // namespace cpi

#include "cpi/contact/edge.hpp"

namespace cpi {

GoodReport good_point_report(const HarrisEvents& h, SpaceTimePoint point, const BlockParams& params,
                             double gamma, Time T, bool short_circuit) {
  const HarrisEvents v = shift_events(h, point.site, point.time);
  GoodReport g;
  g.slow = is_gamma_slow(v, gamma, T);
  if (g.slow || !short_circuit) {
    g.expanding = is_beta_expanding(v, params, horizon_for(params, T), true).overall;
    g.expanding_evaluated = true;
  }
  g.good = g.slow && g.expanding;
  return g;
}

bool is_good_point(const HarrisEvents& h, SpaceTimePoint point, const BlockParams& params, double gamma,
                   Time T) {
  return good_point_report(h, point, params, gamma, T).good;
}

}  // namespace cpi
