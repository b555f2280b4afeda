#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpi/opercolation/closure.hpp"
#include "cpi/renorm/barrier.hpp"
#include "cpi/renorm/block_field.hpp"

namespace cpi {

struct KernelConfig {
  double lambda = 16.0;
  int range = 1;
  std::string weights;  // one-sided csv; overrides range when set

  [[nodiscard]] Kernel make() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct BlockShape {
  int K = 2;
  int N = 16;
  double beta = 0.5;

  [[nodiscard]] BlockParams params(const Kernel& k) const { return BlockParams::make(K, N, beta, k.range()); }
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

// ---- block field ensembles ------------------------------------------------

struct BlockRunConfig {
  KernelConfig kernel;
  BlockShape shape;
  int m_max = 4;
  int n_max = 2;
  std::int64_t fields = 200;
  std::int64_t verify_cells = 0;  // total cells re-derived by CellVerifier
  int closure_k = 1;
  int closure_r = 3;
  std::uint64_t seed = 1;
  Site guard = 0;  // 0 = default_guard(kernel, top time)
  int threads = 0;

  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct CellMismatch {
  std::int64_t field = 0;
  int m = 0;
  int n = 0;
  std::uint8_t phi_forward = 0;
  std::uint8_t phi_verified = 0;
  std::string route;
};

struct BlockRunResult {
  std::vector<BlockField> fields;  // uncontaminated ones, in field order
  std::int64_t contaminated = 0;
  std::int64_t verified = 0;
  std::vector<CellMismatch> mismatches;
  // counts[n][phi]: cells with a parent on level n (phi 0 / 1), and phi 2
  std::vector<std::array<std::int64_t, 3>> phi_counts;
  std::int64_t vacancy_fail = 0;
  std::int64_t descent_fail = 0;
  std::int64_t intrusion_fail = 0;
  std::vector<ClosureRow> closure;
};

BlockRunResult run_blocks(const BlockRunConfig& cfg);
nlohmann::ordered_json block_summary(const BlockRunConfig& cfg, const BlockRunResult& r);

// ---- conditioned beta-expanding samples ------------------------------------

struct ExpandingRunConfig {
  KernelConfig kernel{64.0, 1, ""};
  BlockShape shape{2, 3, 0.5};
  int horizon = 1;
  std::int64_t accept = 100;
  std::int64_t queries = 10000;  // barrier queries per accepted sample
  Site margin = 0;               // sites added on both sides of the needed window; 0 = default guard
  std::int64_t max_draws = 2000000000;
  std::uint64_t seed = 1;
  int threads = 0;

  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct ExpandingSample {
  std::int64_t draw = 0;
  std::uint64_t seed = 0;
  BarrierSet barrier;
  PropertyReport properties;
};

struct ExpandingRunResult {
  std::int64_t draws = 0;  // up to and including the last accepted draw
  std::int64_t prefilter_pass = 0;
  std::int64_t local_pass = 0;
  std::int64_t percolation_fail = 0;
  std::int64_t contaminated = 0;
  std::vector<ExpandingSample> samples;
  bool exhausted = false;  // max_draws reached before `accept` samples
};

/// Rejection sampling: prefilter on a few streams, (beta1) on the layer
/// [0, 1], then the full test; barrier properties on every acceptance.
ExpandingRunResult run_expanding(const ExpandingRunConfig& cfg);
nlohmann::ordered_json expanding_summary(const ExpandingRunConfig& cfg, const ExpandingRunResult& r);

// ---- good points along the edge ---------------------------------------------

struct GoodScanConfig {
  KernelConfig kernel{64.0, 1, ""};
  BlockShape shape{2, 3, 0.5};
  int horizon = 1;
  double gamma = 0.0;        // 0 = lambda, twice the drift of the free right edge
  Time a = 1.0;              // scan starts here
  std::vector<Time> lengths{1.0, 4.0, 9.0, 16.0};  // b - a
  Time dt = 0.002;           // time step along the edge
  std::int64_t replicas = 100;
  std::uint64_t seed = 1;
  Site guard = 0;
  int threads = 0;

  [[nodiscard]] Time slow_T() const;  // horizon time 1 + KN i
  [[nodiscard]] double resolved_gamma() const;
  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct GoodScanReplica {
  bool contaminated = false;
  Time first_good = kInfiniteTime;
  std::int64_t points = 0;
  std::int64_t prefilter_pass = 0;
  std::int64_t local_pass = 0;
  std::int64_t slow_pass = 0;
};

struct GoodScanResult {
  std::vector<GoodScanReplica> replicas;
  std::vector<std::int64_t> no_good;  // per length, over uncontaminated replicas
  std::int64_t used = 0;
};

GoodScanResult run_good_scan(const GoodScanConfig& cfg);
nlohmann::ordered_json good_scan_summary(const GoodScanConfig& cfg, const GoodScanResult& r);

// ---- Gamma(i) escapes on Bernoulli fields -----------------------------------

struct EscapeConfig {
  double p = 0.95;
  double beta = 0.5;
  std::vector<int> levels{1, 2, 3, 4, 5, 6};
  int height = 30;  // stands in for Gamma
  std::int64_t fields = 20000;
  std::uint64_t seed = 1;
  int threads = 0;

  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct EscapeResult {
  std::vector<std::int64_t> holds;    // Gamma(i)
  std::vector<std::int64_t> escapes;  // Gamma(i) and not Gamma(height)
  std::int64_t holds_height = 0;
  std::int64_t fields = 0;
};

EscapeResult run_escapes(const EscapeConfig& cfg);
nlohmann::ordered_json escape_summary(const EscapeConfig& cfg, const EscapeResult& r);

}  // namespace cpi
