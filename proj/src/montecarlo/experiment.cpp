#include "cpi/montecarlo/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "cpi/contact/edge.hpp"
#include "cpi/graphical/harris.hpp"

namespace cpi {

Kernel ExperimentConfig::kernel() const {
  if (!kernel_weights.empty()) return Kernel::parse(lambda, kernel_weights);
  return Kernel::uniform(lambda, range);
}

std::vector<Time> ExperimentConfig::resolved_grid() const {
  if (!grid.empty()) return grid;
  return {T / 8.0, T / 4.0, T / 2.0, T};
}

Site ExperimentConfig::resolved_guard() const { return guard > 0 ? guard : default_guard(kernel(), T); }

void ExperimentConfig::validate() const {
  if (replicas < 1) throw InvalidArgument("experiment: replicas must be >= 1");
  if (!(T > 0.0)) throw InvalidArgument("experiment: T must be positive");
  if (guard < 0) throw InvalidArgument("experiment: guard must be >= 0");
  if (gamma < 0.0) throw InvalidArgument("experiment: gamma must be >= 0");
  (void)kernel();
  const auto g = resolved_grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0) || g[i] > T) throw InvalidArgument("experiment: grid time outside [0, T]");
    if (i > 0 && !(g[i] > g[i - 1])) throw InvalidArgument("experiment: grid must be increasing");
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["range"] = range;
  j["kernel"] = kernel_weights;
  j["T"] = T;
  j["grid"] = resolved_grid();
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["guard"] = resolved_guard();
  j["gamma"] = gamma;
  j["edge_observables"] = edge_observables;
  j["contamination"] = policy == ContaminationPolicy::kAbort ? "abort" : "discard";
  return j;
}

ReplicaResult run_replica(const ExperimentConfig& cfg, std::int64_t i) {
  ReplicaResult r;
  r.index = i;
  r.seed = replica_seed(cfg.seed, i);
  const Site g = cfg.resolved_guard();
  const auto h = sample_harris(cfg.kernel(), Window::make(-g, g, cfg.T), r.seed);
  const auto grid = cfg.resolved_grid();
  r.series = interface_series(h, grid);
  r.contaminated = r.series.any_contaminated();
  if (!cfg.edge_observables) return r;

  const EdgePath path = edge_path(h, cfg.T);
  r.contaminated = r.contaminated || path.contaminated;
  const EdgeSeries q = running_max_edge(path.series);
  const auto& times = path.series.times;
  for (Time t : grid) {
    const auto k = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin()) - 1;
    r.excursion.push_back(q.values[k] - path.series.values[k]);
  }
  if (cfg.gamma > 0.0) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Site v = path.series.values[k];
      if (v != kNoEdge && v > cfg.gamma * times[k]) {
        r.tau_gamma = times[k];
        break;
      }
    }
  }
  return r;
}

}  // namespace cpi
