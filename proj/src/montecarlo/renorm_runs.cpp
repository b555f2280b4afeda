#include "cpi/montecarlo/renorm_runs.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "cpi/contact/edge.hpp"
#include "cpi/montecarlo/experiment.hpp"
#include "cpi/montecarlo/pool.hpp"
#include "cpi/montecarlo/stats.hpp"
#include "cpi/opercolation/paths.hpp"
#include "cpi/renorm/expanding.hpp"
#include "cpi/renorm/verify.hpp"

namespace cpi {

Kernel KernelConfig::make() const {
  if (!weights.empty()) return Kernel::parse(lambda, weights);
  return Kernel::uniform(lambda, range);
}

nlohmann::ordered_json KernelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["range"] = range;
  j["kernel"] = weights;
  return j;
}

nlohmann::ordered_json BlockShape::to_json() const {
  nlohmann::ordered_json j;
  j["K"] = K;
  j["N"] = N;
  j["beta"] = beta;
  return j;
}

namespace {

nlohmann::ordered_json proportion_json(std::int64_t count, std::int64_t trials) {
  if (trials == 0) return {{"count", count}, {"trials", 0}, {"freq", nullptr}, {"ci_lo", nullptr}, {"ci_hi", nullptr}};
  const Proportion p = proportion(count, trials);
  nlohmann::ordered_json j;
  j["count"] = p.count;
  j["trials"] = p.trials;
  j["freq"] = p.freq;
  j["ci_lo"] = p.ci.lo;
  j["ci_hi"] = p.ci.hi;
  return j;
}

nlohmann::ordered_json fit_json(std::span<const double> x, std::span<const double> p, DecayTransform t) {
  nlohmann::ordered_json j;
  try {
    const DecayFit f = decay_fit(x, p, t);
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r2;
    j["used"] = f.used;
    j["dropped"] = f.dropped;
  } catch (const InvalidArgument& e) {
    j["error"] = e.what();
  }
  return j;
}

}  // namespace

// ---- block field ensembles ------------------------------------------------

void BlockRunConfig::validate() const {
  const Kernel k = kernel.make();
  (void)shape.params(k);
  if (m_max < 0 || n_max < 0) throw InvalidArgument("blocks: m_max and n_max must be >= 0");
  if (fields < 1) throw InvalidArgument("blocks: fields must be >= 1");
  if (verify_cells < 0) throw InvalidArgument("blocks: verify cells must be >= 0");
  if (closure_k < 0 || closure_r < 1) throw InvalidArgument("blocks: closure k >= 0 and r >= 1");
  if (guard < 0) throw InvalidArgument("blocks: guard must be >= 0");
}

nlohmann::ordered_json BlockRunConfig::to_json() const {
  nlohmann::ordered_json j = kernel.to_json();
  j.update(shape.to_json());
  j["m_max"] = m_max;
  j["n_max"] = n_max;
  j["fields"] = fields;
  j["verify_cells"] = verify_cells;
  j["closure_k"] = closure_k;
  j["closure_r"] = closure_r;
  j["seed"] = seed;
  j["guard"] = guard;
  return j;
}

namespace {

struct FieldOutcome {
  BlockField field;
  std::int64_t verified = 0;
  std::vector<CellMismatch> mismatches;
};

std::vector<std::pair<int, int>> lattice_cells(const LambdaWindow& lw) {
  std::vector<std::pair<int, int>> cells;
  for (int n = 0; n <= lw.n_max; ++n) {
    for (int m = -lw.m_max; m <= lw.m_max; ++m) {
      if (lw.contains(m, n)) cells.emplace_back(m, n);
    }
  }
  return cells;
}

}  // namespace

BlockRunResult run_blocks(const BlockRunConfig& cfg) {
  cfg.validate();
  const Kernel k = cfg.kernel.make();
  const BlockParams params = cfg.shape.params(k);
  const LambdaWindow lw{cfg.m_max, cfg.n_max, false};
  const SiteInterval need = required_sites(params, lw);
  const Time top = params.level_time(cfg.n_max + 1);
  const Site g = cfg.guard > 0 ? cfg.guard : default_guard(k, top);
  const Window w = Window::make(need.lo - g, need.hi + g, top);
  const auto cells = lattice_cells(lw);

  // verification budget spread evenly, earlier fields take the remainder
  const auto per_field = cfg.verify_cells / cfg.fields;
  const auto extra = cfg.verify_cells % cfg.fields;

  std::vector<FieldOutcome> out(static_cast<std::size_t>(cfg.fields));
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = replica_seed(cfg.seed, static_cast<std::int64_t>(i));
    const auto h = sample_harris(k, w, seed);
    FieldOutcome& o = out[i];
    o.field = block_field(h, params, lw);
    o.field.seed = seed;
    const std::int64_t want = per_field + (static_cast<std::int64_t>(i) < extra ? 1 : 0);
    if (want == 0) return;
    std::mt19937_64 rng(seed ^ 0x5eedce11ULL);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    CellVerifier verifier(h, params, lw);
    for (std::int64_t c = 0; c < want; ++c) {
      const auto [m, n] = cells[pick(rng)];
      const ConditionReport rep = verifier.verify(m, n);
      ++o.verified;
      if (rep.conditions != o.field.conditions(m, n)) {
        o.mismatches.push_back({static_cast<std::int64_t>(i), m, n, o.field.phi(m, n), rep.phi, rep.route});
      }
    }
  });

  BlockRunResult r;
  r.phi_counts.assign(static_cast<std::size_t>(cfg.n_max) + 1, {0, 0, 0});
  for (auto& o : out) {
    r.verified += o.verified;
    r.mismatches.insert(r.mismatches.end(), o.mismatches.begin(), o.mismatches.end());
    if (o.field.contaminated) {
      ++r.contaminated;
      continue;
    }
    for (const auto& [m, n] : cells) {
      const CellConditions& c = o.field.conditions(m, n);
      ++r.phi_counts[static_cast<std::size_t>(n)][c.phi()];
      if (!c.parent) continue;
      r.vacancy_fail += !c.vacancy;
      r.descent_fail += !c.descent;
      r.intrusion_fail += !c.intrusion;
    }
    r.fields.push_back(std::move(o.field));
  }
  if (r.fields.empty()) throw ContaminationError("blocks: all fields contaminated");
  std::vector<PercField> psi;
  psi.reserve(r.fields.size());
  for (const auto& f : r.fields) psi.push_back(f.psi_field());
  // largest r the ensemble supports; none when even single cells are too few
  for (int rr = cfg.closure_r; rr >= 1 && r.closure.empty(); --rr) {
    try {
      r.closure = closure_estimate(psi, cfg.closure_k, rr);
    } catch (const InvalidArgument&) {
    }
  }
  return r;
}

nlohmann::ordered_json block_summary(const BlockRunConfig& cfg, const BlockRunResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "cpi-blocks v1";
  j["config"] = cfg.to_json();
  j["fields_used"] = r.fields.size();
  j["contaminated"] = r.contaminated;
  j["verified_cells"] = r.verified;
  j["mismatches"] = nlohmann::ordered_json::array();
  for (const auto& m : r.mismatches) {
    j["mismatches"].push_back(
        {{"field", m.field}, {"m", m.m}, {"n", m.n}, {"phi", m.phi_forward}, {"verified", m.phi_verified},
         {"route", m.route}});
  }
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < r.phi_counts.size(); ++n) {
    const auto& c = r.phi_counts[n];
    levels.push_back({{"n", n}, {"phi0", c[0]}, {"phi1", c[1]}, {"phi2", c[2]}});
  }
  j["levels"] = levels;
  j["condition_failures"] = {
      {"vacancy", r.vacancy_fail}, {"descent", r.descent_fail}, {"intrusion", r.intrusion_fail}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& c : r.closure) {
    rows.push_back({{"r", c.r}, {"count", c.count}, {"trials", c.trials}, {"freq", c.freq},
                    {"eps_hat", c.eps_hat}, {"ci_lo", c.ci_lo}, {"ci_hi", c.ci_hi}});
  }
  j["closure"] = rows;
  return j;
}

// ---- conditioned beta-expanding samples ------------------------------------

void ExpandingRunConfig::validate() const {
  const Kernel k = kernel.make();
  (void)shape.params(k);
  if (horizon < 1) throw InvalidArgument("expanding: horizon must be >= 1");
  if (accept < 1) throw InvalidArgument("expanding: accept must be >= 1");
  if (queries < 0) throw InvalidArgument("expanding: queries must be >= 0");
  if (margin < 0) throw InvalidArgument("expanding: margin must be >= 0");
  if (max_draws < 1) throw InvalidArgument("expanding: max draws must be >= 1");
}

nlohmann::ordered_json ExpandingRunConfig::to_json() const {
  nlohmann::ordered_json j = kernel.to_json();
  j.update(shape.to_json());
  j["horizon"] = horizon;
  j["accept"] = accept;
  j["queries"] = queries;
  j["margin"] = margin;
  j["max_draws"] = max_draws;
  j["seed"] = seed;
  return j;
}

namespace {

// Survivor of the prefilter; stage 1 = (beta1) failed, 2 = contaminated,
// 3 = percolation failed, 4 = accepted.
struct Survivor {
  std::int64_t draw = 0;
  int stage = 0;
};

}  // namespace

ExpandingRunResult run_expanding(const ExpandingRunConfig& cfg) {
  cfg.validate();
  const Kernel k = cfg.kernel.make();
  const BlockParams params = cfg.shape.params(k);
  const Window need = expanding_window_needed(params, cfg.horizon);
  const Site margin = cfg.margin > 0 ? cfg.margin : default_guard(k, need.t_max);
  const Window full = Window::make(need.x_min - margin, need.x_max + margin, need.t_max);
  const Window layer = Window::make(full.x_min, full.x_max, 1.0);

  const int threads = cfg.threads > 0 ? cfg.threads : default_threads();
  const std::int64_t chunk = 1 << 16;
  const std::int64_t batch = chunk * threads * 4;

  ExpandingRunResult r;
  std::vector<Survivor> survivors;
  std::int64_t accepted = 0;
  std::int64_t done = 0;
  while (accepted < cfg.accept && done < cfg.max_draws) {
    const std::int64_t upto = std::min(cfg.max_draws, done + batch);
    const auto chunks = static_cast<std::size_t>((upto - done + chunk - 1) / chunk);
    std::vector<std::vector<Survivor>> found(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
      const std::int64_t lo = done + static_cast<std::int64_t>(c) * chunk;
      const std::int64_t hi = std::min(upto, lo + chunk);
      for (std::int64_t d = lo; d < hi; ++d) {
        const std::uint64_t seed = replica_seed(cfg.seed, d);
        if (!expanding_prefilter(k, params, seed)) continue;
        Survivor s{d, 1};
        const auto l = expanding_local(sample_harris(k, layer, seed), params);
        if (l.cond_no_death && l.cond_full_descent && l.cond_transmission) {
          const auto e = is_beta_expanding(sample_harris(k, full, seed), params, cfg.horizon, true);
          s.stage = e.contaminated ? 2 : (e.overall ? 4 : 3);
        }
        found[c].push_back(s);
      }
    });
    for (auto& f : found) survivors.insert(survivors.end(), f.begin(), f.end());
    for (const auto& f : found) {
      for (const auto& s : f) accepted += s.stage == 4;
    }
    done = upto;
  }

  // keep everything up to the cfg.accept-th acceptance
  std::vector<std::int64_t> picks;
  std::int64_t cutoff = done;
  for (const auto& s : survivors) {
    if (s.stage == 4 && static_cast<std::int64_t>(picks.size()) < cfg.accept) {
      picks.push_back(s.draw);
      if (static_cast<std::int64_t>(picks.size()) == cfg.accept) cutoff = s.draw + 1;
    }
  }
  r.draws = cutoff;
  r.exhausted = static_cast<std::int64_t>(picks.size()) < cfg.accept;
  for (const auto& s : survivors) {
    if (s.draw >= cutoff) break;
    ++r.prefilter_pass;
    r.local_pass += s.stage >= 2;
    r.contaminated += s.stage == 2;
    r.percolation_fail += s.stage == 3;
  }

  const Time s_max = 1.0 + params.level_time(cfg.horizon);
  r.samples.resize(picks.size());
  parallel_for(picks.size(), threads, [&](std::size_t i) {
    ExpandingSample& s = r.samples[i];
    s.draw = picks[i];
    s.seed = replica_seed(cfg.seed, s.draw);
    const auto h = sample_harris(k, full, s.seed);
    const auto e = is_beta_expanding(h, params, cfg.horizon, true);
    auto b = barrier_from_paths(params, e.gamma);
    if (!b) throw std::logic_error("expanding sample without a barrier");
    validate_barrier(params, *b);
    s.barrier = std::move(*b);
    s.properties = check_barrier_properties(h, params, s.barrier.beta_bar, s_max, cfg.queries, s.seed);
  });
  return r;
}

nlohmann::ordered_json expanding_summary(const ExpandingRunConfig& cfg, const ExpandingRunResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "cpi-expanding v1";
  j["config"] = cfg.to_json();
  j["draws"] = r.draws;
  j["prefilter_pass"] = r.prefilter_pass;
  j["local_pass"] = r.local_pass;
  j["percolation_fail"] = r.percolation_fail;
  j["contaminated"] = r.contaminated;
  j["accepted"] = r.samples.size();
  j["exhausted"] = r.exhausted;
  j["local_rate"] = proportion_json(r.local_pass, r.draws);
  std::int64_t q = 0, v1 = 0, v2 = 0, v2w = 0, v3 = 0, p1 = 0, p3 = 0, cont = 0;
  double bmin = 1.0;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto& s : r.samples) {
    const auto& p = s.properties;
    q += p.queries;
    v1 += p.violations_i;
    v2 += p.violations_ii;
    v2w += p.violations_ii_weak;
    v3 += p.violations_iii;
    p1 += p.premise_i;
    p3 += p.premise_iii;
    cont += p.contaminated;
    bmin = std::min(bmin, s.barrier.beta_bar);
    samples.push_back({{"draw", s.draw}, {"seed", s.seed}, {"beta_bar", s.barrier.beta_bar},
                       {"left", s.barrier.left}, {"right", s.barrier.right}, {"queries", p.queries},
                       {"violations", {p.violations_i, p.violations_ii, p.violations_iii}},
                       {"violations_ii_weak", p.violations_ii_weak}});
  }
  j["queries"] = q;
  j["premise_i"] = p1;
  j["premise_iii"] = p3;
  j["violations_i"] = v1;
  j["violations_ii"] = v2;
  j["violations_ii_weak"] = v2w;
  j["violations_iii"] = v3;
  j["contaminated_queries"] = cont;
  j["beta_bar_min"] = r.samples.empty() ? 0.0 : bmin;
  j["samples"] = samples;
  return j;
}

// ---- good points along the edge ---------------------------------------------

Time GoodScanConfig::slow_T() const {
  const Kernel k = kernel.make();
  return 1.0 + shape.params(k).level_time(horizon);
}

double GoodScanConfig::resolved_gamma() const { return gamma > 0.0 ? gamma : kernel.lambda; }

void GoodScanConfig::validate() const {
  const Kernel k = kernel.make();
  (void)shape.params(k);
  if (horizon < 1) throw InvalidArgument("good scan: horizon must be >= 1");
  if (gamma < 0.0) throw InvalidArgument("good scan: gamma must be >= 0");
  if (!(a >= 0.0)) throw InvalidArgument("good scan: a must be >= 0");
  if (!(dt > 0.0)) throw InvalidArgument("good scan: dt must be positive");
  if (lengths.empty()) throw InvalidArgument("good scan: no lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || (i > 0 && !(lengths[i] > lengths[i - 1]))) {
      throw InvalidArgument("good scan: lengths must be positive and increasing");
    }
  }
  if (replicas < 1) throw InvalidArgument("good scan: replicas must be >= 1");
  if (guard < 0) throw InvalidArgument("good scan: guard must be >= 0");
}

nlohmann::ordered_json GoodScanConfig::to_json() const {
  nlohmann::ordered_json j = kernel.to_json();
  j.update(shape.to_json());
  j["horizon"] = horizon;
  j["gamma"] = resolved_gamma();
  j["slow_T"] = slow_T();
  j["a"] = a;
  j["lengths"] = lengths;
  j["dt"] = dt;
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["guard"] = guard;
  return j;
}

GoodScanResult run_good_scan(const GoodScanConfig& cfg) {
  cfg.validate();
  const Kernel k = cfg.kernel.make();
  const BlockParams params = cfg.shape.params(k);
  const double gamma = cfg.resolved_gamma();
  const Time slow_T = cfg.slow_T();
  const Time b = cfg.a + cfg.lengths.back();
  // a point at time t needs the window up to t + 1 + KN(i + 1)
  const Time top = b + std::max(slow_T, expanding_window_needed(params, cfg.horizon).t_max);
  const Site g = cfg.guard > 0 ? cfg.guard : default_guard(k, top);
  const Window w = Window::make(-g, g, top);
  const auto steps = static_cast<std::int64_t>(std::floor(cfg.lengths.back() / cfg.dt + 1e-9));

  GoodScanResult r;
  r.replicas.resize(static_cast<std::size_t>(cfg.replicas));
  parallel_for(r.replicas.size(), cfg.threads, [&](std::size_t i) {
    GoodScanReplica& o = r.replicas[i];
    const auto h = sample_harris(k, w, replica_seed(cfg.seed, static_cast<std::int64_t>(i)));
    const EdgePath path = edge_path(h, b);
    if (path.contaminated) {
      o.contaminated = true;
      return;
    }
    const StreamIndex idx(h);
    const auto& times = path.series.times;
    for (std::int64_t s = 0; s <= steps; ++s) {
      const Time t = cfg.a + static_cast<double>(s) * cfg.dt;
      const auto at = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin()) - 1;
      const Site x = path.series.values[at];
      if (x == kNoEdge) break;  // died out, no more edge points
      ++o.points;
      if (!expanding_prefilter(idx, params, {x, t})) continue;
      ++o.prefilter_pass;
      const auto view = shift_events(h, x, t);
      const auto l = expanding_local(view, params);
      if (!(l.cond_no_death && l.cond_full_descent && l.cond_transmission)) continue;
      ++o.local_pass;
      bool slow = false;
      try {
        slow = is_gamma_slow(view, gamma, slow_T);
      } catch (const ContaminationError&) {
        o.contaminated = true;
        return;
      }
      if (!slow) continue;
      ++o.slow_pass;
      const auto e = is_beta_expanding(view, params, cfg.horizon, true);
      if (e.contaminated) {
        o.contaminated = true;
        return;
      }
      if (e.overall) {
        o.first_good = t;
        return;
      }
    }
  });
  r.no_good.assign(cfg.lengths.size(), 0);
  for (const auto& o : r.replicas) {
    if (o.contaminated) continue;
    ++r.used;
    for (std::size_t l = 0; l < cfg.lengths.size(); ++l) {
      r.no_good[l] += !(o.first_good <= cfg.a + cfg.lengths[l]);
    }
  }
  return r;
}

nlohmann::ordered_json good_scan_summary(const GoodScanConfig& cfg, const GoodScanResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "cpi-good v1";
  j["config"] = cfg.to_json();
  j["used"] = r.used;
  j["contaminated"] = static_cast<std::int64_t>(r.replicas.size()) - r.used;
  std::int64_t pts = 0, pre = 0, loc = 0, slow = 0;
  for (const auto& o : r.replicas) {
    pts += o.points;
    pre += o.prefilter_pass;
    loc += o.local_pass;
    slow += o.slow_pass;
  }
  j["points"] = pts;
  j["prefilter_pass"] = pre;
  j["local_pass"] = loc;
  j["slow_pass"] = slow;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<double> x, p;
  for (std::size_t l = 0; l < cfg.lengths.size(); ++l) {
    auto row = proportion_json(r.no_good[l], r.used);
    row["length"] = cfg.lengths[l];
    rows.push_back(row);
    x.push_back(cfg.lengths[l]);
    p.push_back(r.used > 0 ? static_cast<double>(r.no_good[l]) / static_cast<double>(r.used) : 0.0);
  }
  j["no_good"] = rows;
  j["fit_sqrt"] = fit_json(x, p, DecayTransform::kSqrt);
  return j;
}

// ---- Gamma(i) escapes on Bernoulli fields -----------------------------------

void EscapeConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("escapes: p must lie in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("escapes: beta must lie in (0, 1)");
  if (levels.empty()) throw InvalidArgument("escapes: no levels");
  for (int i : levels) {
    if (i < 0 || i > height) throw InvalidArgument("escapes: levels must lie in [0, height]");
  }
  if (fields < 1) throw InvalidArgument("escapes: fields must be >= 1");
}

nlohmann::ordered_json EscapeConfig::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["beta"] = beta;
  j["levels"] = levels;
  j["height"] = height;
  j["fields"] = fields;
  j["seed"] = seed;
  return j;
}

EscapeResult run_escapes(const EscapeConfig& cfg) {
  cfg.validate();
  const std::size_t L = cfg.levels.size();
  std::vector<std::vector<std::uint8_t>> holds(static_cast<std::size_t>(cfg.fields), std::vector<std::uint8_t>(L + 1));
  parallel_for(holds.size(), cfg.threads, [&](std::size_t f) {
    const auto field =
        sample_field(cfg.p, cfg.height + 2, cfg.height, replica_seed(cfg.seed, static_cast<std::int64_t>(f)));
    for (std::size_t l = 0; l < L; ++l) holds[f][l] = gamma_event(field, cfg.beta, cfg.levels[l]).holds;
    holds[f][L] = gamma_event(field, cfg.beta, cfg.height).holds;
  });
  EscapeResult r;
  r.fields = cfg.fields;
  r.holds.assign(L, 0);
  r.escapes.assign(L, 0);
  for (const auto& h : holds) {
    r.holds_height += h[L];
    for (std::size_t l = 0; l < L; ++l) {
      r.holds[l] += h[l];
      r.escapes[l] += h[l] && !h[L];
    }
  }
  return r;
}

nlohmann::ordered_json escape_summary(const EscapeConfig& cfg, const EscapeResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "cpi-escapes v1";
  j["config"] = cfg.to_json();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<double> x, p;
  for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
    auto row = proportion_json(r.escapes[l], r.fields);
    row["level"] = cfg.levels[l];
    row["gamma_i"] = proportion_json(r.holds[l], r.fields);
    rows.push_back(row);
    x.push_back(cfg.levels[l]);
    p.push_back(static_cast<double>(r.escapes[l]) / static_cast<double>(r.fields));
  }
  j["escapes"] = rows;
  j["gamma_height"] = proportion_json(r.holds_height, r.fields);
  j["fit"] = fit_json(x, p, DecayTransform::kIdentity);
  return j;
}

}  // namespace cpi
