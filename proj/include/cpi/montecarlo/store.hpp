#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpi/montecarlo/experiment.hpp"

namespace cpi {

/// Replica results in index order plus the resolved config.
struct SampleStore {
  nlohmann::ordered_json config;
  std::string config_hash;
  std::vector<ReplicaResult> replicas;
  std::int64_t contaminated = 0;
  nlohmann::ordered_json summary;

  /// Replicas kept for statistics.
  [[nodiscard]] std::vector<const ReplicaResult*> used() const;
};

/// 16 hex digits of FNV-1a over the compact dump.
std::string config_hash(const nlohmann::ordered_json& config);

/// Runs all replicas (deterministic for a config, any thread count). Under
/// the abort policy a contaminated replica throws ContaminationError; under
/// discard it is kept, flagged and excluded from the summary. Throws
/// ContaminationError when every replica is contaminated.
SampleStore run_experiment(const ExperimentConfig& cfg);

/// Deterministic summary: per grid time speed and |rho| quantiles, tail
/// probabilities at the 90% point of the first grid time, q_t - r_t tails
/// and gamma-slow escapes.
nlohmann::ordered_json summarize(const SampleStore& store, const ExperimentConfig& cfg);

inline constexpr const char* kSamplesCsvHeader =
    "replica,seed,time,r,l,rho,rho_plus,rho_minus,excursion,tau_gamma,contaminated";

void write_samples_csv(std::ostream& out, const SampleStore& store);

/// Writes `text` to path via a temporary name and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// config.json, samples.csv and summary.json in `dir` (created if needed).
void write_store(const std::filesystem::path& dir, const SampleStore& store);

}  // namespace cpi
