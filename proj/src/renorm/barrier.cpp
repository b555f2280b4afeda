#include "cpi/renorm/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <json.hpp>

#include "cpi/graphical/reach.hpp"

namespace cpi {

std::optional<BarrierSet> barrier_from_paths(const BlockParams& params, const GammaResult& g) {
  if (!g.holds || !g.left || !g.right) return std::nullopt;
  BarrierSet b;
  b.left = *g.left;
  b.right = *g.right;
  b.levels = static_cast<int>(b.left.size()) - 1;
  b.rects.push_back({block_interval(params, 0), 0.0, 0.0});
  double slope = 1.0;
  for (int n = 0; n <= b.levels; ++n) {
    for (int m : {b.left[static_cast<std::size_t>(n)], b.right[static_cast<std::size_t>(n)]}) {
      const Box j = block_box(params, m, n);
      b.rects.push_back({block_interval(params, m), j.from, j.from});
      b.rects.push_back({j.sites, j.from, j.to});
    }
    if (n < b.levels) {
      // Boxes of level n occupy (0,1) + [KNn, KN(n+1)] in the original time.
      const double top = 1.0 + params.level_time(n + 1);
      const double gap_l = -(b.left[static_cast<std::size_t>(n)] * params.N / 2.0 + params.M);
      const double gap_r = b.right[static_cast<std::size_t>(n)] * params.N / 2.0 - params.M;
      slope = std::min({slope, gap_l / top, gap_r / top});
    }
  }
  b.beta_bar = 0.999 * std::max(slope, 0.0);
  return b;
}

std::optional<BarrierSet> barrier_region(const BlockField& psi_field) {
  const auto& lw = psi_field.lambda_window();
  const GammaResult g = gamma_event(psi_field.psi_field(), psi_field.params().beta, lw.n_max);
  auto b = barrier_from_paths(psi_field.params(), g);
  if (b) validate_barrier(psi_field.params(), *b);
  return b;
}

void validate_barrier(const BlockParams& params, const BarrierSet& b) {
  if (b.left.empty() || b.left.size() != b.right.size()) throw InvalidArgument("barrier: path lengths differ");
  if (b.left.front() != -2 || b.right.front() != 2) throw InvalidArgument("barrier: paths must start at -2 and 2");
  for (std::size_t n = 0; n < b.left.size(); ++n) {
    const double edge = params.beta * static_cast<double>(n);
    if (!(b.left[n] < -edge) || !(b.right[n] > edge)) throw InvalidArgument("barrier: path enters the cone");
    if (n > 0 && (std::abs(b.left[n] - b.left[n - 1]) != 1 || std::abs(b.right[n] - b.right[n - 1]) != 1)) {
      throw InvalidArgument("barrier: path steps must be +-1");
    }
  }
  for (const Rect& r : b.rects) {
    // a jump of length <= M cannot pass over M consecutive sites
    if (r.sites.size() < params.M) throw InvalidArgument("barrier: rectangle narrower than M");
  }
}

PropertyReport check_barrier_properties(const HarrisEvents& h, const BlockParams& params, double beta_bar,
                                        Time s_max, std::int64_t queries, std::uint64_t seed) {
  const Window& w = h.window();
  if (!(s_max > 0.0) || s_max > w.t_max) throw WindowError("check_barrier_properties: s_max outside window");
  PropertyReport rep;
  rep.beta_bar = beta_bar;
  rep.s_max = s_max;
  rep.queries = queries;

  // Starting sites x: up to 63 distinct sites around I_{-2} u I_0 u I_2.
  const Site reach = block_interval(params, 2).hi + 2 * params.N;
  const Site x_lo = std::max(w.x_min + params.M, -reach);
  const Site x_hi = std::min(w.x_max - params.M, reach);
  std::mt19937_64 rng(seed);
  std::vector<Site> xs;
  {
    std::vector<Site> all;
    for (Site x = x_lo; x <= x_hi; ++x) {
      if (x != 0) all.push_back(x);
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(all.size(), 63));
    xs = std::move(all);
  }
  std::vector<ChannelSpec> specs{{SpaceTimeRegion::point({0, 0.0}), std::nullopt}};
  for (Site x : xs) specs.push_back({SpaceTimeRegion::point({x, 0.0}), std::nullopt});

  struct Query {
    int ch;
    Site z;
    Time s;
  };
  std::vector<Query> qs;
  std::uniform_int_distribution<int> pick(1, static_cast<int>(xs.size()));
  std::uniform_real_distribution<double> time(0.0, s_max);
  for (std::int64_t k = 0; k < queries; ++k) {
    const Time s = time(rng);
    const int spread = static_cast<int>(std::ceil(beta_bar * s)) + 2 * params.M;
    std::uniform_int_distribution<int> zpick(std::max(w.x_min, -spread), std::min(w.x_max, spread));
    qs.push_back({pick(rng), zpick(rng), s});
  }
  std::sort(qs.begin(), qs.end(), [](const Query& a, const Query& b) { return a.s < b.s; });

  Sweep sweep(h, specs);
  const SiteInterval left{w.x_min, w.x_min + params.M - 1};
  const SiteInterval right{w.x_max - params.M + 1, w.x_max};
  bool edge = false;
  auto visit = [&](const Event& e, std::uint64_t, const Sweep& sw) {
    if (e.is_arrow() && (left.contains(e.to) || right.contains(e.to)) && sw.mask(e.to)) edge = true;
  };
  for (const Query& q : qs) {
    sweep.advance_to(q.s, visit);
    rep.contaminated += edge;
    const Site x = xs[static_cast<std::size_t>(q.ch - 1)];
    const bool from_x = sweep.reached(q.ch, q.z);
    const bool from_o = sweep.reached(0, q.z);
    if (from_x && cone_contains(beta_bar, {q.z, q.s})) {
      ++rep.premise_i;
      rep.violations_i += !from_o;
    }
    if (from_x && ((x < 0 && q.z > 0) || (x > 0 && q.z < 0))) {
      ++rep.premise_iii;
      rep.violations_iii += !from_o;
    }
    const auto r0 = sweep.rightmost(0);
    const double need = q.s >= 1.0 ? beta_bar * q.s : 0.0;
    const double weak = std::max(0.0, beta_bar * q.s - 1.0);
    rep.violations_ii += !r0 || *r0 < need;
    rep.violations_ii_weak += !r0 || *r0 < weak;
  }
  return rep;
}

void write_property_json(std::ostream& out, const PropertyReport& r) {
  nlohmann::ordered_json j{{"queries", r.queries},
                           {"beta_bar", r.beta_bar},
                           {"s_max", r.s_max},
                           {"premise_i", r.premise_i},
                           {"violations_i", r.violations_i},
                           {"violations_ii", r.violations_ii},
                           {"violations_ii_weak", r.violations_ii_weak},
                           {"premise_iii", r.premise_iii},
                           {"violations_iii", r.violations_iii},
                           {"contaminated", r.contaminated}};
  out << j.dump(2) << '\n';
}

}  // namespace cpi
