#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpi/graphical/brute_force.hpp"
#include "cpi/renorm/block_field.hpp"

namespace cpi {

/// Independent recomputation of one cell's conditions.
struct ConditionReport {
  int m = 0;
  int n = 0;
  CellConditions conditions;
  std::uint8_t phi = 0;
  std::string route;  // "brute-force" or "dual-sweep"
  std::string note;
};

/// Recomputes cells without the forward sweep of block_field: exhaustive
/// path search when the construction has at most `oracle_cap` events, a
/// backward dual sweep otherwise. Parent values are verified recursively and
/// memoized per verifier.
class CellVerifier {
 public:
  CellVerifier(const HarrisEvents& h, BlockParams params, LambdaWindow lw,
               std::size_t oracle_cap = kDefaultOracleCap);

  ConditionReport verify(int m, int n);

 private:
  bool occupied(Site x, Time t);
  std::vector<std::uint8_t> occupied_span(SiteInterval span, Time t);

  HarrisEvents h_;
  BlockParams params_;
  LambdaWindow lw_;
  bool brute_;
  std::map<std::pair<int, int>, ConditionReport> memo_;
  std::map<std::pair<Site, Time>, bool> occupied_memo_;
};

ConditionReport verify_block_cell(const HarrisEvents& h, const BlockParams& params,
                                  const LambdaWindow& lw, int m, int n);

}  // namespace cpi
