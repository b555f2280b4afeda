#include "cpi/montecarlo/store.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cpi/contact/edge.hpp"
#include "cpi/montecarlo/pool.hpp"
#include "cpi/montecarlo/stats.hpp"

namespace cpi {

std::vector<const ReplicaResult*> SampleStore::used() const {
  std::vector<const ReplicaResult*> out;
  for (const auto& r : replicas) {
    if (!r.contaminated) out.push_back(&r);
  }
  return out;
}

std::string config_hash(const nlohmann::ordered_json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SampleStore run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  SampleStore store;
  store.config = cfg.to_json();
  store.config_hash = config_hash(store.config);
  store.replicas.resize(static_cast<std::size_t>(cfg.replicas));
  parallel_for(store.replicas.size(), cfg.threads, [&](std::size_t i) {
    store.replicas[i] = run_replica(cfg, static_cast<std::int64_t>(i));
    if (store.replicas[i].contaminated && cfg.policy == ContaminationPolicy::kAbort) {
      throw ContaminationError("replica " + std::to_string(i) + " contaminated (seed " +
                               std::to_string(store.replicas[i].seed) + ")");
    }
  });
  for (const auto& r : store.replicas) store.contaminated += r.contaminated;
  if (store.contaminated == cfg.replicas) throw ContaminationError("experiment: all replicas contaminated");
  store.summary = summarize(store, cfg);
  return store;
}

namespace {

nlohmann::ordered_json prop_json(const Proportion& p) {
  return {{"count", p.count}, {"trials", p.trials}, {"freq", p.freq}, {"ci_lo", p.ci.lo}, {"ci_hi", p.ci.hi}};
}

}  // namespace

nlohmann::ordered_json summarize(const SampleStore& store, const ExperimentConfig& cfg) {
  using json = nlohmann::ordered_json;
  const auto used = store.used();
  const auto grid = cfg.resolved_grid();
  const auto n = static_cast<std::int64_t>(used.size());
  json s;
  s["schema"] = "cpi-summary v1";
  s["config_hash"] = store.config_hash;
  s["replicas"] = static_cast<std::int64_t>(store.replicas.size());
  s["contaminated"] = store.contaminated;
  s["used"] = n;

  auto abs_rho = [&](std::size_t j) {
    std::vector<double> v;
    for (const auto* r : used) v.push_back(std::abs(static_cast<double>(r->series.rho[j])));
    return v;
  };

  json per_time = json::array();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> edges;
    double rho_sum = 0.0;
    for (const auto* r : used) {
      edges.push_back(static_cast<double>(r->series.r[j]));
      rho_sum += static_cast<double>(r->series.rho[j]);
    }
    json row;
    row["t"] = grid[j];
    if (grid[j] > 0.0 && n > 1) {
      const auto sp = speed_estimate(edges, grid[j], static_cast<double>(kNoEdge));
      row["alpha"] = sp.alpha;
      row["alpha_ci_lo"] = sp.ci.lo;
      row["alpha_ci_hi"] = sp.ci.hi;
    }
    const auto a = abs_rho(j);
    row["mean_rho"] = rho_sum / static_cast<double>(n);
    row["abs_rho_q50"] = empirical_quantile(a, 0.5);
    row["abs_rho_q90"] = empirical_quantile(a, 0.9);
    row["abs_rho_q99"] = empirical_quantile(a, 0.99);
    per_time.push_back(row);
  }
  s["per_time"] = per_time;

  // L from the first grid time, then P(|rho_t| > L) at every grid time.
  const double L = empirical_quantile(abs_rho(0), 0.9);
  json tight = json::array();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto a = abs_rho(j);
    const auto k = std::count_if(a.begin(), a.end(), [&](double v) { return v > L; });
    json row = prop_json(proportion(k, n));
    row["t"] = grid[j];
    tight.push_back(row);
  }
  s["tightness"] = {{"L", L}, {"rows", tight}};

  if (cfg.edge_observables) {
    json exc = json::array();
    for (int Lq = 0; Lq <= 20; ++Lq) {
      json row;
      row["L"] = Lq;
      json ps = json::array();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        std::int64_t k = 0;
        for (const auto* r : used) k += r->excursion[j] > Lq;
        ps.push_back(prop_json(proportion(k, n)));
      }
      row["by_time"] = ps;
      exc.push_back(row);
    }
    s["excursion"] = exc;
  }
  if (cfg.edge_observables && cfg.gamma > 0.0) {
    json slow = json::array();
    for (Time t : grid) {
      if (2.0 * t > cfg.T || !(t > 0.0)) continue;
      std::int64_t up_to = 0, escape = 0;
      for (const auto* r : used) {
        up_to += r->tau_gamma > t;
        escape += r->tau_gamma > t && r->tau_gamma <= 2.0 * t;
      }
      slow.push_back({{"T", t}, {"slow_up_to_T", prop_json(proportion(up_to, n))},
                      {"escape_by_2T", prop_json(proportion(escape, n))}});
    }
    s["slow"] = {{"gamma", cfg.gamma}, {"rows", slow}};
  }
  return s;
}

void write_samples_csv(std::ostream& out, const SampleStore& store) {
  out << "# cpi-samples v1\n" << kSamplesCsvHeader << '\n';
  for (const auto& r : store.replicas) {
    const auto& s = r.series;
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      out << r.index << ',' << r.seed << ',' << s.times[j] << ',' << s.r[j] << ',' << s.l[j] << ',' << s.rho[j]
          << ',' << s.rho_plus[j] << ',' << s.rho_minus[j] << ',';
      if (j < r.excursion.size()) out << r.excursion[j];
      out << ',';
      if (std::isinf(r.tau_gamma)) {
        out << "inf";
      } else {
        out << r.tau_gamma;
      }
      out << ',' << (r.contaminated ? 1 : 0) << '\n';
    }
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_store(const std::filesystem::path& dir, const SampleStore& store) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json cfg = store.config;
  cfg["config_hash"] = store.config_hash;
  write_file_atomic(dir / "config.json", cfg.dump(2) + "\n");
  std::ostringstream csv;
  csv.precision(17);
  write_samples_csv(csv, store);
  write_file_atomic(dir / "samples.csv", csv.str());
  write_file_atomic(dir / "summary.json", store.summary.dump(2) + "\n");
}

}  // namespace cpi
