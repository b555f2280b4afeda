#include "cpi/cli/verify_suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "cpi/contact/chi.hpp"
#include "cpi/contact/evolve.hpp"
#include "cpi/graphical/brute_force.hpp"
#include "cpi/graphical/reach.hpp"
#include "cpi/montecarlo/experiment.hpp"
#include "cpi/montecarlo/pool.hpp"
#include "cpi/montecarlo/renorm_runs.hpp"
#include "cpi/renorm/expanding.hpp"

namespace cpi::cli {

nlohmann::ordered_json SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = name;
  j["cases"] = cases;
  j["checks"] = checks;
  j["failures"] = failures;
  j["notes"] = notes;
  return j;
}

HarrisEvents random_small_construction(std::mt19937_64& rng, int sites, int max_events, Time t_max, int range) {
  const Kernel kernel = Kernel::uniform(1.0, range);
  const Window w = Window::make(0, sites - 1, t_max);
  std::uniform_int_distribution<int> count(0, max_events);
  std::uniform_int_distribution<int> site(0, sites - 1);
  std::uniform_int_distribution<int> disp(-range, range);
  std::uniform_real_distribution<double> time(0.0, t_max);
  std::bernoulli_distribution death(0.4);
  std::vector<Event> ev;
  const int n = count(rng);
  while (static_cast<int>(ev.size()) < n) {
    const Site x = site(rng);
    const Time t = time(rng);
    if (death(rng)) {
      ev.push_back({t, x, x});
      continue;
    }
    const int d = disp(rng);
    if (d == 0 || !w.contains_site(x + d)) continue;
    ev.push_back({t, x, x + d});
  }
  return HarrisEvents::from_events(kernel, w, std::move(ev));
}

namespace {

struct CaseResult {
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  std::string note;
};

using CaseFn = std::function<CaseResult(std::int64_t, std::mt19937_64&)>;

SuiteReport run_cases(const std::string& name, std::int64_t cases, std::uint64_t seed, int threads,
                      const CaseFn& f) {
  std::vector<CaseResult> out(static_cast<std::size_t>(cases));
  parallel_for(out.size(), threads, [&](std::size_t c) {
    std::mt19937_64 rng(replica_seed(seed, static_cast<std::int64_t>(c)));
    out[c] = f(static_cast<std::int64_t>(c), rng);
  });
  SuiteReport r{name, cases, 0, 0, {}};
  for (const auto& c : out) {
    r.checks += c.checks;
    r.failures += c.failures;
    if (c.failures > 0 && r.notes.size() < 5) r.notes.push_back(c.note);
  }
  return r;
}

std::string describe(std::int64_t c, const std::string& what) {
  std::ostringstream os;
  os << "case " << c << ": " << what;
  return os.str();
}

// connects against path enumeration on <= 6 sites and <= 12 events.
CaseResult oracle_case(std::int64_t c, std::mt19937_64& rng) {
  static constexpr Time grid[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  const int sites = 2 + static_cast<int>(c % 5);
  const int range = sites >= 3 && c % 2 ? 2 : 1;
  const auto h = random_small_construction(rng, sites, 12, 2.0, range);
  std::optional<SiteSet> inside;
  if (c % 3 == 0 && sites >= 3) inside = SiteSet{{1, sites - 1}};
  CaseResult r;
  for (Site x = 0; x < sites; ++x) {
    for (std::size_t i = 0; i < 5; ++i) {
      for (Site y = 0; y < sites; ++y) {
        for (std::size_t j = i; j < 5; ++j) {
          const SpaceTimePoint a{x, grid[i]}, b{y, grid[j]};
          ++r.checks;
          if (connects(h, a, b, inside) != brute_force_connects(h, a, b, inside)) {
            if (r.failures++ == 0) {
              std::ostringstream os;
              os << "(" << x << "," << grid[i] << ") -> (" << y << "," << grid[j] << ")";
              r.note = describe(c, os.str());
            }
          }
        }
      }
    }
  }
  return r;
}

bool subset(const SiteSet& a, const SiteSet& b) {
  for (const auto& iv : a.intervals()) {
    for (Site x = iv.lo; x <= iv.hi; ++x) {
      if (!b.contains(x)) return false;
    }
  }
  return true;
}

SiteSet unite(SiteSet a, const SiteSet& b) {
  for (const auto& iv : b.intervals()) a.add(iv);
  return a;
}

// Monotonicity and additivity of separately evolved finite starts.
CaseResult coupling_case(std::int64_t c, std::mt19937_64& rng) {
  static constexpr double lambdas[] = {0.8, 1.2, 2.0};
  static const std::vector<Time> grid{0.0, 1.0, 2.5, 5.0, 10.0, 15.0, 20.0};
  const Window w = Window::make(-50, 50, 20.0);
  const auto h = sample_harris(Kernel::nearest_neighbor(lambdas[c % 3]), w, rng());
  std::uniform_int_distribution<int> site(-20, 20), size(1, 6);
  auto draw = [&] {
    SiteSet s;
    for (int k = size(rng); k > 0; --k) {
      const Site x = site(rng);
      s.add({x, x});
    }
    return s;
  };
  const SiteSet a = draw(), extra = draw(), b = unite(a, extra), d = draw();
  const auto ea = evolve(h, Configuration::finite(a), grid);
  const auto eb = evolve(h, Configuration::finite(b), grid);
  const auto ed = evolve(h, Configuration::finite(d), grid);
  const auto ead = evolve(h, Configuration::finite(unite(a, d)), grid);
  CaseResult r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.checks += 2;
    const bool mono = subset(ea.states[i].sites, eb.states[i].sites);
    const bool add = ead.states[i].sites == unite(ea.states[i].sites, ed.states[i].sites);
    if (!mono || !add) {
      if (r.failures == 0) r.note = describe(c, !mono ? "monotonicity" : "additivity");
      r.failures += !mono + !add;
    }
  }
  return r;
}

// chi from the coupled pair against the direct three-state sweep.
CaseResult chi_case(std::int64_t c, std::mt19937_64& rng) {
  static constexpr double lambdas[] = {1.0, 2.0, 4.0};
  static const std::vector<Time> grid{0.0, 1.0, 2.0, 4.0, 8.0};
  const Window w = Window::make(-40, 40, 8.0);
  const auto h = sample_harris(Kernel::nearest_neighbor(lambdas[c % 3]), w, rng());
  const Configuration inits[] = {Configuration::left_half_line(0, w), Configuration::all(w)};
  const auto pair = couple(h, inits, grid);
  const auto a = chi_from_coupling(pair[0], pair[1]);
  const auto b = chi_direct(h, chi_standard_init(w), grid);
  CaseResult r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t x = 0; x < a.values[i].size(); ++x) {
      ++r.checks;
      if (a.values[i][x] != b.values[i][x]) {
        if (r.failures++ == 0) r.note = describe(c, "site/time mismatch");
      }
    }
  }
  return r;
}

// Constructions biased towards the local expansion conditions: chains from
// the origin plus a little noise, checked for prefilter soundness.
CaseResult prefilter_case(std::int64_t c, std::mt19937_64& rng) {
  const auto p = BlockParams::make(2, 3, 0.5, 1);
  const Kernel k = Kernel::nearest_neighbor(4.0);
  const Window w = Window::make(-8, 8, 1.5);
  std::uniform_int_distribution<int> site(-6, 6);
  std::uniform_real_distribution<double> time(0.0, 1.2);
  std::vector<Event> ev;
  std::vector<double> ts(8);
  for (double& t : ts) t = time(rng);
  std::sort(ts.begin(), ts.end());
  for (int j = 1; j <= 4; ++j) {
    if (rng() % 6) ev.push_back({ts[static_cast<std::size_t>(j - 1)], j - 1, j});
    if (rng() % 6) ev.push_back({ts[static_cast<std::size_t>(j + 3)], 1 - j, -j});
  }
  for (int q = static_cast<int>(rng() % 4); q > 0; --q) {
    const Site x = site(rng);
    const int d = static_cast<int>(rng() % 3) - 1;
    ev.push_back({time(rng), x, x + d});
  }
  std::sort(ev.begin(), ev.end(), event_before);
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  const auto h = HarrisEvents::from_events(k, w, ev);
  const auto l = expanding_local(h, p, false);
  const bool ok = l.cond_no_death && l.cond_full_descent && l.cond_transmission;
  CaseResult r;
  r.checks = ok;
  if (ok && !expanding_prefilter(h, p)) {
    r.failures = 1;
    r.note = describe(c, "prefilter rejected a passing construction");
  }
  return r;
}

SuiteReport blocks_suite(std::int64_t cases, std::uint64_t seed, int threads) {
  BlockRunConfig cfg;
  cfg.kernel.lambda = 8.0;
  cfg.shape = {2, 3, 0.5};
  cfg.m_max = 4;
  cfg.n_max = 2;
  cfg.fields = std::max<std::int64_t>(4, cases / 20);
  cfg.verify_cells = cases;
  cfg.seed = seed;
  cfg.threads = threads;
  const auto r = run_blocks(cfg);
  SuiteReport rep{"blocks", cases, r.verified, static_cast<std::int64_t>(r.mismatches.size()), {}};
  for (const auto& m : r.mismatches) {
    if (rep.notes.size() >= 5) break;
    std::ostringstream os;
    os << "field " << m.field << " cell (" << m.m << "," << m.n << ") phi " << int{m.phi_forward} << " vs "
       << int{m.phi_verified} << " via " << m.route;
    rep.notes.push_back(os.str());
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle", "coupling", "chi", "blocks", "prefilter"};
  return names;
}

std::int64_t default_cases(const std::string& suite) {
  static const std::map<std::string, std::int64_t> d{
      {"oracle", 10000}, {"coupling", 1000}, {"chi", 500}, {"blocks", 200}, {"prefilter", 20000}};
  const auto it = d.find(suite);
  if (it == d.end()) throw InvalidArgument("unknown suite '" + suite + "'");
  return it->second;
}

SuiteReport run_suite(const std::string& suite, std::int64_t cases, std::uint64_t seed, int threads) {
  if (cases < 0) throw InvalidArgument("verify: cases must be >= 0");
  if (cases == 0) cases = default_cases(suite);
  if (suite == "oracle") return run_cases(suite, cases, seed, threads, oracle_case);
  if (suite == "coupling") return run_cases(suite, cases, seed, threads, coupling_case);
  if (suite == "chi") return run_cases(suite, cases, seed, threads, chi_case);
  if (suite == "prefilter") return run_cases(suite, cases, seed, threads, prefilter_case);
  if (suite == "blocks") return blocks_suite(cases, seed, threads);
  throw InvalidArgument("unknown suite '" + suite + "'");
}

}  // namespace cpi::cli
