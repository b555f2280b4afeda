#pragma once

#include <cstdint>
#include <ostream>
#include <set>
#include <string>

namespace cpi::cli {

// Flag values after defaults < config file < command line. `given` holds the
// names (without dashes) that were set explicitly, so commands can apply
// their own defaults to the rest.
struct Options {
  std::string command;
  double lambda = 0.0;
  int range = 1;
  std::string kernel;
  double T = 40.0;
  std::string grid;
  std::int64_t replicas = 100;
  std::uint64_t seed = 1;
  int guard = 0;
  int K = 2;
  int N = 16;
  double beta = 0.5;
  double gamma = 0.0;
  double p = 0.95;
  int i = 1;
  int height = 30;
  std::string levels;
  std::string out;
  int threads = 0;
  bool dump_events = false;
  std::string load_events;
  bool abort_contaminated = false;
  bool discard_contaminated = false;
  std::string what = "field";
  std::int64_t cases = 0;
  std::int64_t queries = 10000;
  std::int64_t max_draws = 2000000000;
  std::string lengths;
  double dt = 0.002;
  double a = 1.0;
  int m_max = 0;
  std::string suite = "all";
  std::string in;
  std::set<std::string> given;

  [[nodiscard]] bool has(const std::string& name) const { return given.count(name) > 0; }
};

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_interface(const Options& o, std::ostream& out, std::ostream& err);
int cmd_blocks(const Options& o, std::ostream& out, std::ostream& err);
int cmd_percolate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& o, std::ostream& out, std::ostream& err);
int cmd_plot(const Options& o, std::ostream& out, std::ostream& err);

}  // namespace cpi::cli
