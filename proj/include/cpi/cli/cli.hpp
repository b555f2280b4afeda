#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitContaminated = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Subcommands simulate, interface, blocks, percolate, verify, plot.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace cpi::cli
