#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpi/contact/interface.hpp"
#include "cpi/graphical/kernel.hpp"

namespace cpi {

enum class ContaminationPolicy { kDiscard, kAbort };

/// Interface replicas: eta^{(-inf,0]} and eta^{1} coupled on [-G, G] x [0, T].
struct ExperimentConfig {
  double lambda = 4.0;
  int range = 1;
  std::string kernel_weights;  // one-sided csv; overrides range when set
  Time T = 40.0;
  std::vector<Time> grid;      // sample times, last one <= T; empty = {T/8, T/4, T/2, T}
  std::int64_t replicas = 100;
  std::uint64_t seed = 1;
  Site guard = 0;              // half-width G; 0 = default_guard(kernel, T)
  double gamma = 0.0;          // > 0: record the first time r_t > gamma t
  bool edge_observables = true;
  ContaminationPolicy policy = ContaminationPolicy::kDiscard;
  int threads = 0;

  [[nodiscard]] Kernel kernel() const;
  [[nodiscard]] std::vector<Time> resolved_grid() const;
  [[nodiscard]] Site resolved_guard() const;
  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct ReplicaResult {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  bool contaminated = false;
  InterfaceSeries series;
  std::vector<Site> excursion;  // q_t - r_t at the grid times
  double tau_gamma = kNever;    // first t <= T with r_t > gamma t
};

/// Seed of replica i: base xor i.
inline std::uint64_t replica_seed(std::uint64_t base, std::int64_t i) {
  return base ^ static_cast<std::uint64_t>(i);
}

ReplicaResult run_replica(const ExperimentConfig& cfg, std::int64_t i);

}  // namespace cpi
