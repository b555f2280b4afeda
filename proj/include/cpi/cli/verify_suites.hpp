#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpi/graphical/harris.hpp"

namespace cpi::cli {

struct SuiteReport {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  std::vector<std::string> notes;  // first few failures

  [[nodiscard]] bool ok() const { return failures == 0; }
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// oracle, coupling, chi, blocks, prefilter.
const std::vector<std::string>& suite_names();
/// Default case counts of the suites, in suite_names() order.
std::int64_t default_cases(const std::string& suite);

/// Runs one suite with `cases` random cases (0 = default). Throws
/// InvalidArgument for an unknown suite.
SuiteReport run_suite(const std::string& suite, std::int64_t cases, std::uint64_t seed, int threads);

/// Random construction on sites 0..sites-1 with at most `max_events` deaths
/// and arrows, uniform times on [0, t_max].
HarrisEvents random_small_construction(std::mt19937_64& rng, int sites, int max_events, Time t_max, int range);

}  // namespace cpi::cli
