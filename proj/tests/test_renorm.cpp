#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "cpi/graphical/reach.hpp"
#include "cpi/renorm/barrier.hpp"
#include "cpi/renorm/expanding.hpp"
#include "cpi/renorm/verify.hpp"

using namespace cpi;

namespace {

BlockField field_from(const PercField& f, const BlockParams& p) {
  BlockField b(p, {f.m_max(), f.n_max(), false});
  for (int n = 0; n <= f.n_max(); ++n) {
    for (int m = -f.m_max(); m <= f.m_max(); ++m) {
      if (!PercField::on_lattice(m, n)) continue;
      const bool o = f.open(m, n);
      b.set_conditions(m, n, {true, o, o, o});
    }
  }
  return b;
}

HarrisEvents fixture() {
  return HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), Window::make(-8, 8, 20.0),
                                   {{1.0, -1, -2}, {1.0, 1, 2}, {2.0, 2, 3}});
}

// Chains 0 -> 1 -> ... -> reach and 0 -> -1 -> ... on [0, 1] and nothing else
// there, so the local conditions hold; after time 1 the events of a sample.
HarrisEvents expanding_fixture(const Kernel& k, const Window& w, int reach, std::uint64_t seed) {
  const auto s = sample_harris(k, w, seed);
  std::vector<Event> ev;
  for (const Event& e : s.raw_events()) {
    if (e.time > 1.0) ev.push_back(e);
  }
  for (int j = 1; j <= reach; ++j) {
    const double t = 0.9 * j / (reach + 1);
    ev.push_back({t, j - 1, j});
    ev.push_back({t, 1 - j, -j});
  }
  return HarrisEvents::from_events(k, w, ev, seed);
}

}  // namespace

TEST_CASE("intervals and boxes") {
  CHECK(block_interval(10, 0) == SiteInterval{-4, 5});
  CHECK(block_interval(10, 1) == SiteInterval{1, 10});
  CHECK(block_interval(10, -1) == SiteInterval{-9, 0});
  const auto p = BlockParams::make(3, 10, 0.5, 1);
  const Box j = block_box(p, 2, 1);
  CHECK(j.sites == SiteInterval{9, 11});
  CHECK(j.from == 30.0);
  CHECK(j.to == 60.0);
  CHECK(neighbour_span(p, 0) == SiteInterval{-9, 10});
  CHECK(p.vacant_len == 4);
  // consecutive intervals tile Z twice
  for (int m = -5; m < 5; ++m) CHECK(block_interval(7, m + 2).lo == block_interval(7, m).hi + 1);
  CHECK_THROWS_AS(BlockParams::make(3, 2, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(BlockParams::make(1, 10, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(BlockParams::make(3, 10, 1.0, 1), InvalidArgument);
}

TEST_CASE("cone membership") {
  for (double rho : {0.1, 0.5, 0.99}) CHECK(cone_contains(rho, {0, 0.0}));
  CHECK(cone_contains(0.5, {5, 10.0}));
  CHECK_FALSE(cone_contains(0.5, {6, 10.0}));
  CHECK(cone_contains(0.5, {-5, 10.0}));
  CHECK_FALSE(cone_contains(0.5, {0, -1.0}));
  CHECK(cone_contains(0.5, {3, 2.0}, {8, 12.0}));
  CHECK_FALSE(cone_contains(0.5, {3, 2.0}, {9, 12.0}));
}

TEST_CASE("lambda zero gives phi 0 on level 0 and 2 above") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  const LambdaWindow lw{3, 2, false};
  const auto h = sample_harris(Kernel::nearest_neighbor(0.0), Window::make(-20, 20, 40.0), 5);
  const BlockField f = block_field(h, p, lw);
  for (int m = -3; m <= 3; ++m) {
    for (int n = 0; n <= 2; ++n) {
      if (!lw.contains(m, n)) continue;
      CHECK(f.phi(m, n) == (n == 0 ? 0 : 2));
      CHECK(f.psi(m, n) == (n != 0));
    }
  }
  CHECK_FALSE(f.conditions(2, 0).vacancy);
  const auto rep = verify_block_cell(h, p, lw, 2, 0);
  CHECK_FALSE(rep.conditions.vacancy);
  CHECK(rep.conditions.descent);
  CHECK(rep.conditions.intrusion);
  CHECK(rep.phi == 0);
}

TEST_CASE("hand-built fixture") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const LambdaWindow lw{0, 0, false};
  const auto h = fixture();
  const BlockField f = block_field(h, p, lw);
  CHECK(f.phi(0, 0) == 1);
  CHECK_FALSE(f.contaminated);
  const auto rep = verify_block_cell(h, p, lw, 0, 0);
  CHECK(rep.route == "brute-force");
  CHECK(rep.conditions == CellConditions{true, true, true, true});
  CHECK(rep.phi == 1);

  // an intruding arrow into J from a site the source never reaches
  std::vector<Event> ev(h.raw_events().begin(), h.raw_events().end());
  ev.push_back({0.5, 3, 2});
  ev.push_back({0.6, 2, 1});
  ev.push_back({0.25, 2, 2});
  ev.push_back({0.25, 1, 1});
  const auto h2 = HarrisEvents::from_events(h.kernel(), h.window(), ev);
  const BlockField f2 = block_field(h2, p, lw);
  const auto rep2 = verify_block_cell(h2, p, lw, 0, 0);
  CHECK(f2.conditions(0, 0) == rep2.conditions);
  CHECK_FALSE(rep2.conditions.intrusion);
}

TEST_CASE("recursion branch") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  CellConditions c{false, true, true, true};
  CHECK(c.phi() == 2);
  // whatever the events, no parent with phi 1 forces 2
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto h = sample_harris(Kernel::nearest_neighbor(rep % 2 ? 1.0 : 4.0), Window::make(-60, 60, 50.0), rep);
    const LambdaWindow lw{5, 3, false};
    const BlockField f = block_field(h, p, lw);
    for (int n = 1; n <= 3; ++n) {
      for (int m = -5 + 1; m <= 5 - 1; ++m) {
        if (!lw.contains(m, n)) continue;
        const bool parent = f.phi(m - 1, n - 1) == 1 || f.phi(m + 1, n - 1) == 1;
        CHECK((f.phi(m, n) == 2) == !parent);
      }
    }
  }
}

TEST_CASE("verify agrees with block_field") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  const LambdaWindow lw{4, 3, false};
  std::mt19937_64 rng(7);
  int counts[3] = {0, 0, 0};
  for (int rep = 0; rep < 40; ++rep) {
    const auto h = sample_harris(Kernel::nearest_neighbor(3.0 + rep % 3), Window::make(-40, 40, 50.0), 100 + rep);
    const BlockField f = block_field(h, p, lw);
    CellVerifier v(h, p, lw);
    for (int k = 0; k < 5; ++k) {
      const int n = std::uniform_int_distribution<int>(0, 3)(rng);
      int m = std::uniform_int_distribution<int>(-4, 4)(rng);
      if ((m + n) % 2 != 0) m += (m < 4 ? 1 : -1);
      const auto r = v.verify(m, n);
      CHECK(r.route == "dual-sweep");
      CHECK(r.conditions == f.conditions(m, n));
      CHECK(r.phi == f.phi(m, n));
      ++counts[f.phi(m, n)];
    }
  }
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
}

TEST_CASE("small constructions use the brute-force route") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const LambdaWindow lw{1, 1, false};
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> site(-6, 6);
  std::uniform_real_distribution<double> time(0.0, 12.0);
  int agreed = 0;
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<Event> ev;
    const int count = std::uniform_int_distribution<int>(0, 20)(rng);
    while (static_cast<int>(ev.size()) < count) {
      const Site x = site(rng);
      const int d = std::uniform_int_distribution<int>(-1, 1)(rng);
      if (x + d < -6 || x + d > 6) continue;
      ev.push_back({time(rng), x, x + d});
    }
    const auto h = HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), Window::make(-6, 6, 12.0), ev);
    const BlockField f = block_field(h, p, lw);
    CellVerifier v(h, p, lw);
    for (auto [m, n] : {std::pair{-1, 1}, std::pair{0, 0}, std::pair{1, 1}, std::pair{2, 0}}) {
      if (!lw.contains(m, n)) continue;
      const auto r = v.verify(m, n);
      CHECK(r.route == "brute-force");
      CHECK(r.conditions == f.conditions(m, n));
      agreed += r.conditions == f.conditions(m, n);
    }
  }
  CHECK(agreed > 0);
}

TEST_CASE("later slabs do not change lower levels") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  const LambdaWindow lw{4, 3, false};
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto h = sample_harris(Kernel::nearest_neighbor(4.0), Window::make(-40, 40, 50.0), 300 + rep);
    const int level = rep % 3;
    std::vector<Event> ev(h.raw_events().begin(), h.raw_events().end());
    std::uniform_real_distribution<double> late(p.level_time(level + 1) + 1e-6, 50.0);
    std::uniform_int_distribution<int> site(-40, 40);
    for (int k = 0; k < 200; ++k) {
      const Site x = site(rng);
      ev.push_back({late(rng), x, x});
    }
    const auto h2 = HarrisEvents::from_events(h.kernel(), h.window(), ev);
    const BlockField a = block_field(h, p, lw);
    const BlockField b = block_field(h2, p, lw);
    for (int n = 0; n <= level; ++n) {
      for (int m = -4; m <= 4; ++m) {
        if (lw.contains(m, n)) CHECK(a.phi(m, n) == b.phi(m, n));
      }
    }
  }
}

TEST_CASE("block csv and coverage") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const auto h = fixture();
  std::ostringstream os;
  write_block_csv(os, block_field(h, p, {0, 0, false}));
  CHECK(os.str() == "m,n,phi,psi\n0,0,1,1\n");
  CHECK_THROWS_AS(block_field(h, p, {5, 0, false}), WindowError);
  CHECK_THROWS_AS(block_field(h, p, {0, 3, false}), WindowError);
}

TEST_CASE("beta-expanding trivial cases") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  const Window need = expanding_window_needed(p, 1);
  const Window w = Window::make(need.x_min - 2, need.x_max + 2, need.t_max);
  const auto none = HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), w, {});
  const auto r = is_beta_expanding(none, p, 1);
  CHECK(r.cond_no_death);
  CHECK_FALSE(r.cond_full_descent);
  CHECK_FALSE(r.overall);

  const auto dead = HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), w, {{0.5, 0, 0}});
  const auto r2 = is_beta_expanding(dead, p, 1);
  CHECK_FALSE(r2.cond_no_death);
  CHECK_FALSE(r2.overall);

  CHECK(horizon_for(p, 1.5) == 1);
  CHECK(horizon_for(p, 13.0) == 1);
  CHECK(horizon_for(p, 13.5) == 2);
  CHECK_THROWS_AS(is_beta_expanding(none, p, 3), WindowError);

  const auto shifted = sample_harris(Kernel::nearest_neighbor(4.0), Window::make(-80, 80, 40.0), 1);
  CHECK_FALSE(is_good_point(HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), w, {{0.5, 0, 0}}),
                            {0, 0.0}, p, 1.0, 2.0));
  (void)shifted;
}

TEST_CASE("transmission needs the origin") {
  const auto p = BlockParams::make(3, 6, 0.5, 2);
  const Window need = expanding_window_needed(p, 0);
  const Window w = Window::make(need.x_min - 2, need.x_max + 2, need.t_max);
  const Kernel k = Kernel::uniform(1.0, 2);
  // (-1,0) -> (1,0.5) jumps over 0
  const auto bad = HarrisEvents::from_events(k, w, {{0.5, -1, 1}});
  CHECK_FALSE(is_beta_expanding(bad, p, 0).cond_transmission);
  const auto good = HarrisEvents::from_events(k, w, {{0.2, 0, 1}, {0.5, -1, 1}});
  CHECK(is_beta_expanding(good, p, 0).cond_transmission);
  // arrival at 1 before the origin gets there
  const auto early = HarrisEvents::from_events(k, w, {{0.5, 0, 1}, {0.2, -1, 1}});
  CHECK_FALSE(is_beta_expanding(early, p, 0).cond_transmission);
}

TEST_CASE("beta-expanding monotone in the horizon") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const Kernel k = Kernel::nearest_neighbor(32.0);
  const Window need = expanding_window_needed(p, 3);
  int seen = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto h = expanding_fixture(k, need, 4, s);
    const auto local = expanding_local(h, p, false);
    REQUIRE(local.cond_no_death);
    REQUIRE(local.cond_full_descent);
    REQUIRE(local.cond_transmission);
    bool prev = true;
    for (int i = 0; i <= 3; ++i) {
      const auto r = is_beta_expanding(h, p, i);
      CHECK(r.overall == (r.cond_no_death && r.cond_full_descent && r.cond_transmission && r.cond_percolation));
      CHECK((!r.overall || prev));
      prev = r.overall;
      seen += r.overall;
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("prefilter reads the same streams as the sampler") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  for (double lam : {4.0, 64.0}) {
    const Kernel k = Kernel::nearest_neighbor(lam);
    for (std::uint64_t s = 0; s < 3000; ++s) {
      const auto h = sample_harris(k, Window::make(-7, 7, 1.0), s);
      CHECK(expanding_prefilter(k, p, s) == expanding_prefilter(h, p));
    }
  }
  CHECK(expanding_prefilter(Kernel::uniform(1.0, 2), p, 1));
}

TEST_CASE("prefilter never rejects a passing construction") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const Kernel k = Kernel::nearest_neighbor(4.0);
  const Window w = Window::make(-8, 8, 1.5);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> site(-6, 6);
  std::uniform_real_distribution<double> time(0.0, 1.2);
  int passing = 0, rejected = 0;
  for (int rep = 0; rep < 20000; ++rep) {
    std::vector<Event> ev;
    std::vector<double> ts(8);
    for (double& t : ts) t = time(rng);
    std::sort(ts.begin(), ts.end());
    for (int j = 1; j <= 4; ++j) {
      if (rng() % 6) ev.push_back({ts[static_cast<std::size_t>(j - 1)], j - 1, j});
      if (rng() % 6) ev.push_back({ts[static_cast<std::size_t>(j + 3)], 1 - j, -j});
    }
    const int noise = static_cast<int>(rng() % 4);
    for (int q = 0; q < noise; ++q) {
      const Site x = site(rng);
      const int d = static_cast<int>(rng() % 3) - 1;
      ev.push_back({time(rng), x, x + d});
    }
    std::sort(ev.begin(), ev.end(), event_before);
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    const auto h = HarrisEvents::from_events(k, w, ev);
    const auto l = expanding_local(h, p, false);
    const bool ok = l.cond_no_death && l.cond_full_descent && l.cond_transmission;
    const bool pf = expanding_prefilter(h, p);
    if (ok) CHECK(pf);
    passing += ok;
    rejected += !pf;
  }
  CHECK(passing > 100);
  CHECK(rejected > 100);
}

TEST_CASE("indexed prefilter matches the shifted construction") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const Kernel k = Kernel::nearest_neighbor(16.0);
  const Window w = Window::make(-20, 20, 6.0);
  int rejected = 0, kept = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto h = sample_harris(k, w, s);
    const StreamIndex idx(h);
    for (Site x = -10; x <= 10; x += 5)
      for (Time t : {0.0, 1.3, 2.7, 4.0}) {
        const bool a = expanding_prefilter(idx, p, {x, t});
        CHECK(a == expanding_prefilter(shift_events(h, x, t), p));
        rejected += !a;
        kept += a;
      }
  }
  CHECK(rejected > 0);
}

TEST_CASE("barrier from all-open and blocked fields") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  PercField open(12, 8);
  for (int n = 0; n <= 8; ++n)
    for (int m = -12; m <= 12; ++m)
      if (PercField::on_lattice(m, n)) open.set(m, n, true);
  const auto b = barrier_region(field_from(open, p));
  REQUIRE(b.has_value());
  CHECK(b->left.front() == -2);
  CHECK(b->right.front() == 2);
  CHECK(b->left.size() == 9);
  CHECK(b->beta_bar > 0.0);
  CHECK(b->beta_bar < 1.0);
  CHECK_NOTHROW(validate_barrier(p, *b));

  PercField band(12, 8);
  for (int n = 0; n <= 8; ++n)
    for (int m = -12; m <= 12; ++m)
      if (PercField::on_lattice(m, n) && std::abs(m) <= 0.5 * n) band.set(m, n, true);
  CHECK_FALSE(barrier_region(field_from(band, p)).has_value());
}

TEST_CASE("barrier exists exactly when gamma holds") {
  const auto p = BlockParams::make(2, 6, 0.5, 1);
  int found = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const PercField f = sample_field(0.75, 12, 8, s);
    const bool g = gamma_event(f, 0.5, 8).holds;
    const auto b = barrier_region(field_from(f, p));
    CHECK(g == b.has_value());
    found += g;
  }
  CHECK(found > 0);
  CHECK(found < 1000);
}

TEST_CASE("barrier properties on expanding samples") {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const Kernel k = Kernel::nearest_neighbor(64.0);
  const int i = 1;
  const Window need = expanding_window_needed(p, i);
  const Window w = Window::make(need.x_min - 40, need.x_max + 40, need.t_max);
  int accepted = 0;
  std::int64_t big_bad = 0;
  for (std::uint64_t s = 0; s < 40 && accepted < 5; ++s) {
    const auto h = expanding_fixture(k, w, 4, s);
    const auto r = is_beta_expanding(h, p, i, true);
    if (!r.overall) continue;
    ++accepted;
    const auto b = barrier_from_paths(p, r.gamma);
    REQUIRE(b.has_value());
    const Time smax = 1.0 + p.level_time(i);
    const auto rep = check_barrier_properties(h, p, b->beta_bar, smax, 3000, s);
    CHECK(rep.violations_i == 0);
    CHECK(rep.violations_ii == 0);
    CHECK(rep.violations_ii_weak == 0);
    CHECK(rep.violations_iii == 0);
    CHECK(rep.premise_i > 0);
    CHECK(rep.premise_iii > 0);
    // short times hold for any slope below 1
    CHECK(check_barrier_properties(h, p, 0.99, 1.0, 500, s).clean());
    big_bad += check_barrier_properties(h, p, 20.0, smax, 3000, s).violations_ii;
  }
  CHECK(accepted > 0);
  CHECK(big_bad > 0);
}
