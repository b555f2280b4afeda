#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cpi/graphical/brute_force.hpp"
#include "cpi/graphical/event_io.hpp"
#include "cpi/graphical/reach.hpp"
#include "support.hpp"

using namespace cpi;

namespace {

HarrisEvents fixture(std::vector<Event> ev, Site lo = -3, Site hi = 3, Time t_max = 2.0) {
  return HarrisEvents::from_events(Kernel::nearest_neighbor(1.0), Window::make(lo, hi, t_max),
                                   std::move(ev));
}

}  // namespace

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(Kernel::parse(1.0, "1,0"), InvalidArgument);
  CHECK_THROWS_AS(Kernel::parse(1.0, "-1"), InvalidArgument);
  CHECK_THROWS_AS(Kernel::nearest_neighbor(-1.0), InvalidArgument);
  const Kernel k = Kernel::parse(2.0, "3,1");
  CHECK(k.range() == 2);
  CHECK(k.weight(1) == doctest::Approx(0.375));
  CHECK(k.weight(-2) == doctest::Approx(0.125));
  CHECK(k.weight(0) == 0.0);
  CHECK(k.rate(1) == doctest::Approx(0.75));
}

TEST_CASE("sample_harris basics") {
  CHECK_THROWS_AS(Window::make(0, 5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Window::make(3, 2, 1.0), InvalidArgument);

  const auto h0 = sample_harris(Kernel::nearest_neighbor(0.0), Window::make(-5, 5, 10.0), 3);
  int arrows = 0;
  for (const Event& e : h0.events()) arrows += e.is_arrow();
  CHECK(arrows == 0);
  CHECK(h0.size() > 0);

  const Kernel k = Kernel::nearest_neighbor(2.0);
  const Window w = Window::make(-10, 10, 5.0);
  CHECK(sample_harris(k, w, 11).events() == sample_harris(k, w, 11).events());
  CHECK(sample_harris(k, w, 11).events() != sample_harris(k, w, 12).events());

  // Death count at one site over [0,100] is Poisson(100).
  double total = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    total += static_cast<double>(
        sample_harris(Kernel::nearest_neighbor(0.0), Window::make(0, 0, 100.0), s).size());
  }
  CHECK(std::abs(total / seeds - 100.0) <= 5.0 * std::sqrt(100.0 / seeds));
}

TEST_CASE("window extension invariance") {
  const Kernel k = Kernel::uniform(1.5, 2);
  const auto big = sample_harris(k, Window::make(-20, 20, 8.0), 99);
  const Window sub = Window::make(-5, 7, 3.0);
  CHECK(restrict_events(big, sub).events() == sample_harris(k, sub, 99).events());
}

TEST_CASE("shift_events") {
  const auto h = fixture({{3.0, 5, 5}}, 0, 10, 5.0);
  CHECK(shift_events(h, 0, 0.0).events() == h.events());
  const auto s = shift_events(h, 5, 1.0);
  REQUIRE(s.size() == 1);
  CHECK(s.events()[0] == Event{2.0, 0, 0});
  CHECK_THROWS_AS(shift_events(h, 0, 5.0), WindowError);

  const auto r = sample_harris(Kernel::nearest_neighbor(2.0), Window::make(-10, 10, 6.0), 5);
  CHECK(shift_events(shift_events(r, 2, 0.5), -3, 1.25).events() ==
        shift_events(r, -1, 1.75).events());
}

TEST_CASE("forward_closure worked cases") {
  const auto empty = fixture({});
  const std::vector<Time> q{1.0};
  auto m = forward_closure(empty, SpaceTimeRegion::point({0, 0.0}), q);
  CHECK(m.at(0) == SiteSet{{0, 0}});

  const auto d = fixture({{0.5, 0, 0}});
  const std::vector<Time> q2{0.4, 1.0};
  m = forward_closure(d, SpaceTimeRegion::point({0, 0.0}), q2);
  CHECK(m.at(0) == SiteSet{{0, 0}});
  CHECK(m.at(1).empty());
  CHECK_THROWS_AS(forward_closure(d, SpaceTimeRegion::point({0, 0.0}), std::vector<Time>{3.0}),
                  WindowError);
  CHECK_THROWS_AS(forward_closure(d, SpaceTimeRegion::point({9, 0.0}), q), WindowError);
}

TEST_CASE("band sources survive deaths while inside the band") {
  const auto h = fixture({{0.5, 0, 0}, {0.7, 0, 1}, {1.5, 0, -1}});
  const auto band = SpaceTimeRegion::band(SiteSet{{0, 0}}, 0.0, 1.0);
  const ChannelSpec spec{band, std::nullopt};
  Sweep sweep(h, std::span<const ChannelSpec>(&spec, 1));
  sweep.advance_to(1.0);
  CHECK(sweep.reached(0, 0));
  CHECK(sweep.reached(0, 1));
  sweep.advance_to(2.0);
  // The band ended at 1.0; site 0 stays reached (no later death) and sends to -1.
  CHECK(sweep.reached(0, -1));
}

TEST_CASE("connects worked cases") {
  const auto empty = fixture({});
  CHECK(connects(empty, {0, 0.0}, {0, 0.0}));
  const auto a = fixture({{0.5, 0, 1}});
  CHECK(connects(a, {0, 0.0}, {1, 1.0}));
  CHECK_FALSE(connects(a, {1, 0.0}, {0, 1.0}));
  CHECK_THROWS_AS(connects(a, {0, 1.0}, {0, 0.5}), InvalidArgument);
  CHECK_FALSE(connects(a, {0, 0.0}, {1, 1.0}, SiteSet{{-3, 0}}));
}

TEST_CASE("brute force truth table on two sites") {
  // Each single event on sites {0,1}, for all start/end pairs at times 0 -> 1.
  const Kernel k = Kernel::nearest_neighbor(1.0);
  const Window w = Window::make(0, 1, 1.0);
  struct Case {
    Event e;
    bool expect[2][2];  // [from][to]
  };
  const Case cases[] = {
      {{0.5, 0, 0}, {{false, false}, {false, true}}},
      {{0.5, 1, 1}, {{true, false}, {false, false}}},
      {{0.5, 0, 1}, {{true, true}, {false, true}}},
      {{0.5, 1, 0}, {{true, false}, {true, true}}},
  };
  for (const Case& c : cases) {
    const auto h = HarrisEvents::from_events(k, w, {c.e});
    for (Site x = 0; x < 2; ++x) {
      for (Site y = 0; y < 2; ++y) {
        CHECK(brute_force_connects(h, {x, 0.0}, {y, 1.0}) == c.expect[x][y]);
        CHECK(connects(h, {x, 0.0}, {y, 1.0}) == c.expect[x][y]);
      }
    }
  }
  std::vector<Event> many;
  for (int i = 0; i < 21; ++i) many.push_back({0.01 * (i + 1), 0, 0});
  CHECK_THROWS_AS(brute_force_connects(HarrisEvents::from_events(k, w, many), {0, 0.0}, {0, 1.0}),
                  InvalidArgument);
}

TEST_CASE("sweep matches brute force on random small constructions") {
  std::mt19937_64 rng(20261019);
  const Time grid[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  int mismatches = 0;
  for (int c = 0; c < 500; ++c) {
    const auto h = testing::random_small(rng, 6, 12, 2.0, 1 + c % 2);
    std::optional<SiteSet> inside;
    if (c % 3 == 0) inside = SiteSet{{1, 4}};
    for (Site x = 0; x < 6; ++x) {
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i; j < 5; ++j) {
          for (Site y = 0; y < 6; ++y) {
            const SpaceTimePoint a{x, grid[i]}, b{y, grid[j]};
            mismatches += connects(h, a, b, inside) != brute_force_connects(h, a, b, inside);
          }
        }
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("reach monotone in sources and events, shift covariant, transitive") {
  std::mt19937_64 rng(7);
  const Kernel k = Kernel::nearest_neighbor(2.0);
  const Window w = Window::make(-15, 15, 4.0);
  const std::vector<Time> q{1.0, 2.0, 4.0};
  for (int c = 0; c < 100; ++c) {
    const auto h = sample_harris(k, w, c);
    const auto small = forward_closure(h, SpaceTimeRegion::at_time(SiteSet{{0, 1}}, 0.0), q);
    const auto large = forward_closure(h, SpaceTimeRegion::at_time(SiteSet{{-2, 3}}, 0.0), q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (Site x : small.at(i).sites()) CHECK(large.at(i).contains(x));
    }

    auto ev = h.events();
    std::vector<Event> no_death, no_arrow;
    bool dropped_d = false, dropped_a = false;
    for (const Event& e : ev) {
      if (e.is_death() && !dropped_d) { dropped_d = true; no_arrow.push_back(e); continue; }
      if (e.is_arrow() && !dropped_a) { dropped_a = true; no_death.push_back(e); continue; }
      no_death.push_back(e);
      no_arrow.push_back(e);
    }
    const auto src = SpaceTimeRegion::point({0, 0.0});
    const auto base = forward_closure(h, src, q);
    const auto more = forward_closure(HarrisEvents::from_events(k, w, no_death), src, q);
    const auto less = forward_closure(HarrisEvents::from_events(k, w, no_arrow), src, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (Site x : base.at(i).sites()) CHECK(more.at(i).contains(x));
      for (Site x : less.at(i).sites()) CHECK(base.at(i).contains(x));
    }

    const auto s = h.shifted(3, 0.5);
    std::uniform_int_distribution<int> site(-8, 8);
    std::uniform_real_distribution<double> t(0.5, 4.0);
    for (int j = 0; j < 20; ++j) {
      Time t1 = t(rng), t2 = t(rng), t3 = t(rng);
      if (t1 > t2) std::swap(t1, t2);
      if (t2 > t3) std::swap(t2, t3);
      if (t1 > t2) std::swap(t1, t2);
      const SpaceTimePoint a{site(rng), t1}, b{site(rng), t2}, cc{site(rng), t3};
      CHECK(connects(h, a, b) == connects(s, {a.site - 3, a.time - 0.5}, {b.site - 3, b.time - 0.5}));
      if (connects(h, a, b) && connects(h, b, cc)) CHECK(connects(h, a, cc));
    }
  }
}

TEST_CASE("event text round trip") {
  const auto h = sample_harris(Kernel::parse(1.7, "2,1"), Window::make(-6, 6, 3.0), 42);
  const auto v = h.shifted(2, 0.75);
  std::stringstream ss;
  write_events(ss, v);
  const auto back = read_events(ss);
  CHECK(back.origin() == v.origin());
  CHECK(back.raw_window() == v.raw_window());
  CHECK(back.seed() == 42);
  CHECK(back.events() == v.events());
  std::stringstream broken("lambda 1\nkernel 1\nwindow 0 3 1\nQ 1 2\n");
  CHECK_THROWS_AS(read_events(broken), InvalidArgument);
}

TEST_CASE("single streams match the sampler") {
  const Kernel k = Kernel::uniform(3.0, 2);
  const auto h = sample_harris(k, Window::make(-6, 6, 4.0), 17);
  CHECK(sample_stream(k, 17, 2, 0, 4.0) == h.deaths_at(2));
  CHECK(sample_stream(k, 17, 2, -2, 4.0) == h.arrows_between(2, 0));
  CHECK(sample_stream(k, 17, -1, 1, 4.0) == h.arrows_between(-1, 0));
  CHECK(sample_stream(k, 17, 0, 3, 4.0).empty());
}
