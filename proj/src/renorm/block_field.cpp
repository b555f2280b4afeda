#include "cpi/renorm/block_field.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "cpi/graphical/reach.hpp"

namespace cpi {

BlockField::BlockField(BlockParams params, LambdaWindow lw) : params_(params), lw_(lw) {
  if (lw.m_max < 0 || lw.n_max < 0) throw InvalidArgument("block field: negative Lambda window");
  cells_.assign(static_cast<std::size_t>(2 * lw.m_max + 1) * static_cast<std::size_t>(lw.n_max + 1),
                CellConditions{false, false, false, false});
}

PercField BlockField::psi_field() const {
  std::ostringstream src;
  src << "psi(seed=" << seed << ", K=" << params_.K << ", N=" << params_.N << ")";
  PercField f(lw_.m_max, lw_.n_max, src.str());
  for (int n = 0; n <= lw_.n_max; ++n) {
    for (int m = -lw_.m_max; m <= lw_.m_max; ++m) {
      if (lw_.contains(m, n)) f.set(m, n, psi(m, n));
    }
  }
  return f;
}

SiteInterval required_sites(const BlockParams& params, const LambdaWindow& lw) {
  return {block_interval(params, -lw.m_max - 1).lo - params.M,
          block_interval(params, lw.m_max + 1).hi + params.M};
}

void check_coverage(const HarrisEvents& h, const BlockParams& params, const LambdaWindow& lw) {
  params.validate();
  if (h.kernel().range() != params.M) throw InvalidArgument("block field: kernel range differs from M");
  const Window& w = h.window();
  for (int n = 0; n <= lw.n_max; ++n) {
    for (int m = -lw.m_max; m <= lw.m_max; ++m) {
      if (!lw.contains(m, n)) continue;
      const SiteInterval span = neighbour_span(params, m);
      const bool space = span.lo - params.M >= w.x_min && span.hi + params.M <= w.x_max;
      const bool time = params.level_time(n + 1) <= w.t_max;
      if (!space || !time) {
        std::ostringstream os;
        os << "block field: window cannot support cell (" << m << ", " << n << ")"
           << (space ? "" : " spatially") << (time ? "" : " in time");
        throw WindowError(os.str());
      }
    }
  }
}

namespace {

// eta^1 at the level times 0, KN, ..., KN(n_max+1), as per-site flags.
struct UpperLevels {
  std::vector<std::vector<std::uint8_t>> occupied;
  bool contaminated = false;
};

UpperLevels upper_levels(const HarrisEvents& h, const BlockParams& p, int n_max, SiteInterval roi) {
  const Window& w = h.window();
  const Time end = p.level_time(n_max + 1);
  const SiteInterval left{w.x_min, std::min(w.x_max, w.x_min + p.M - 1)};
  const SiteInterval right{std::max(w.x_min, w.x_max - p.M + 1), w.x_max};
  const ChannelSpec specs[] = {
      {SpaceTimeRegion::at_time(SiteSet::from_interval(w.sites()), 0.0), std::nullopt},
      {SpaceTimeRegion::band(SiteSet::from_interval(left), 0.0, end), std::nullopt},
      {SpaceTimeRegion::band(SiteSet::from_interval(right), 0.0, end), std::nullopt},
  };
  Sweep sweep(h, specs);
  UpperLevels out;
  for (int n = 0; n <= n_max + 1; ++n) {
    sweep.advance_to(p.level_time(n));
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(w.width()));
    for (Site x = w.x_min; x <= w.x_max; ++x) occ[static_cast<std::size_t>(x - w.x_min)] = sweep.reached(0, x);
    out.occupied.push_back(std::move(occ));
    const auto fl = sweep.rightmost(1);
    const auto fr = sweep.leftmost(2);
    if ((fl && *fl >= roi.lo) || (fr && *fr <= roi.hi)) out.contaminated = true;
  }
  return out;
}

bool no_vacant_run(const std::vector<std::uint8_t>& occ, Site x_min, SiteInterval span, int len) {
  int run = 0;
  for (Site x = span.lo; x <= span.hi; ++x) {
    run = occ[static_cast<std::size_t>(x - x_min)] ? 0 : run + 1;
    if (run >= len) return false;
  }
  return true;
}

}  // namespace

BlockField block_field(const HarrisEvents& h, const BlockParams& params, const LambdaWindow& lw) {
  check_coverage(h, params, lw);
  BlockField field(params, lw);
  field.seed = h.seed();
  field.origin = h.origin();
  field.window = h.raw_window();

  const Window& w = h.window();
  const SiteInterval roi{block_interval(params, -lw.m_max - 1).lo, block_interval(params, lw.m_max + 1).hi};
  const UpperLevels upper = upper_levels(h, params, lw.n_max, roi);
  field.contaminated = upper.contaminated;
  const SiteInterval left_band{w.x_min, w.x_min + params.M - 1};
  const SiteInterval right_band{w.x_max - params.M + 1, w.x_max};

  constexpr int kCellsPerSweep = 32;
  for (int n = 0; n <= lw.n_max; ++n) {
    std::vector<int> cells;
    for (int m = -lw.m_max; m <= lw.m_max; ++m) {
      if (lw.contains(m, n)) cells.push_back(m);
    }
    const Time t0 = params.level_time(n);
    const Time t1 = params.level_time(n + 1);
    const auto& occ0 = upper.occupied[static_cast<std::size_t>(n)];
    const auto& occ1 = upper.occupied[static_cast<std::size_t>(n + 1)];

    for (std::size_t first = 0; first < cells.size(); first += kCellsPerSweep) {
      const std::size_t count = std::min<std::size_t>(kCellsPerSweep, cells.size() - first);
      std::vector<ChannelSpec> specs;
      std::vector<int> j_owner(static_cast<std::size_t>(w.width()), -1);
      std::uint64_t source_bits = 0;
      for (std::size_t c = 0; c < count; ++c) {
        const int m = cells[first + c];
        const SiteInterval im = block_interval(params, m);
        std::vector<Site> src;
        for (Site x = im.lo; x <= im.hi; ++x) {
          if (occ0[static_cast<std::size_t>(x - w.x_min)]) src.push_back(x);
        }
        specs.push_back({SpaceTimeRegion::at_time(SiteSet::from_sites(src), t0), std::nullopt});
        const SiteSet outside = SiteSet::from_interval(im).complement_within(w.sites());
        specs.push_back({SpaceTimeRegion::band(outside, t0, t1), std::nullopt});
        source_bits |= 1ULL << (2 * c);
        const Box j = block_box(params, m, n);
        for (Site z = j.sites.lo; z <= j.sites.hi; ++z) j_owner[static_cast<std::size_t>(z - w.x_min)] = static_cast<int>(c);
      }
      Sweep sweep(h, specs);
      std::vector<std::uint8_t> intruded(count, 0);
      bool edge = false;
      sweep.advance_to(t1, [&](const Event& e, std::uint64_t, const Sweep& sw) {
        if (!e.is_arrow()) return;
        const std::uint64_t mk = sw.mask(e.to);
        if ((left_band.contains(e.to) || right_band.contains(e.to)) && (mk & source_bits)) edge = true;
        const int c = j_owner[static_cast<std::size_t>(e.to - w.x_min)];
        if (c < 0) return;
        const bool s = (mk >> (2 * c)) & 1ULL;
        const bool o = (mk >> (2 * c + 1)) & 1ULL;
        if (o && !s) intruded[static_cast<std::size_t>(c)] = 1;
      });
      field.contaminated |= edge;

      for (std::size_t c = 0; c < count; ++c) {
        const int m = cells[first + c];
        CellConditions cond;
        cond.parent = n == 0 || field.phi(m - 1, n - 1) == 1 || field.phi(m + 1, n - 1) == 1;
        const SiteInterval span = neighbour_span(params, m);
        cond.vacancy = no_vacant_run(occ1, w.x_min, span, params.vacant_len);
        cond.descent = true;
        for (Site y = span.lo; y <= span.hi && cond.descent; ++y) {
          if (occ1[static_cast<std::size_t>(y - w.x_min)] && !sweep.reached(static_cast<int>(2 * c), y)) {
            cond.descent = false;
          }
        }
        cond.intrusion = !intruded[c];
        field.set_conditions(m, n, cond);
      }
    }
  }
  return field;
}

void write_block_csv(std::ostream& out, const BlockField& f) {
  const auto& lw = f.lambda_window();
  out << "m,n,phi,psi\n";
  for (int n = 0; n <= lw.n_max; ++n) {
    for (int m = -lw.m_max; m <= lw.m_max; ++m) {
      if (lw.contains(m, n)) out << m << ',' << n << ',' << int(f.phi(m, n)) << ',' << int(f.psi(m, n)) << '\n';
    }
  }
}

}  // namespace cpi
