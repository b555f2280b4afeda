#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cpi/opercolation/paths.hpp"
#include "cpi/renorm/block_field.hpp"

namespace cpi {

struct ExpandReport {
  bool cond_transmission = false;  // (x,0) <-> (y,t), x != y, t <= 1  =>  (0,0) <-> (y,t)
  bool cond_no_death = false;      // no death at 0 during [0, 1]
  bool cond_full_descent = false;  // (0,0) <-> (z,1) for z in I_{-2} u I_0 u I_2
  bool cond_percolation = false;   // Psi of H^{(0,1)} in Gamma(horizon_i)
  bool percolation_evaluated = false;
  int horizon_i = 0;
  bool overall = false;
  bool contaminated = false;
  std::optional<BlockField> field;  // Psi of H^{(0,1)} when evaluated
  GammaResult gamma;
};

/// Lambda window used for Gamma(i): the cone |m| + n <= 2i + 2 up to level i.
LambdaWindow expanding_lambda_window(int horizon_i);

/// Horizon i with T in (1 + KN(i-1), 1 + KN i].
int horizon_for(const BlockParams& params, Time T);

/// Sites and time a window needs around the origin for horizon i.
Window expanding_window_needed(const BlockParams& params, int horizon_i);

/// beta-expanding up to horizon i at the origin of the view `h`. With
/// `short_circuit`, the block field is only built when the first three
/// conditions hold.
ExpandReport is_beta_expanding(const HarrisEvents& h, const BlockParams& params, int horizon_i,
                               bool short_circuit = false);

/// (beta1), no death at 0 and full descent only; needs the window up to time 1.
/// The sources of (beta1) are the window's sites, so the answer matches
/// is_beta_expanding on any construction with the same spatial window.
ExpandReport expanding_local(const HarrisEvents& h, const BlockParams& params, bool short_circuit = true);

/// Necessary condition for expanding_local on sample_harris(kernel, w, seed)
/// for any window w containing I_{-2} u I_0 u I_2 (plus one site) and time 1,
/// read from a few streams only. Always true for kernels other than nearest
/// neighbour.
bool expanding_prefilter(const Kernel& kernel, const BlockParams& params, std::uint64_t seed);
/// Same test read from the events of h (origin of the view).
bool expanding_prefilter(const HarrisEvents& h, const BlockParams& params);

/// Event times of a construction per stream, in view coordinates, for
/// repeated prefilter calls at many points.
class StreamIndex {
 public:
  explicit StreamIndex(const HarrisEvents& h);
  /// First time >= t of deaths at x (d == 0) or arrows x -> x + d.
  [[nodiscard]] Time at_or_after(Site x, int d, Time t) const;
  [[nodiscard]] bool nearest_neighbour() const { return nearest_; }

 private:
  static std::uint64_t key(Site x, int d) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(d);
  }
  bool nearest_ = false;
  std::unordered_map<std::uint64_t, std::vector<Time>> times_;
};

/// Prefilter for the construction shifted to `at`.
bool expanding_prefilter(const StreamIndex& idx, const BlockParams& params, SpaceTimePoint at);

void write_expand_json(std::ostream& out, const ExpandReport& r);

}  // namespace cpi

namespace cpi {

struct GoodReport {
  bool slow = false;
  bool expanding = false;
  bool good = false;
  bool expanding_evaluated = false;
};

/// (beta, gamma)-good up to T at `point`: beta-expanding up to T and
/// gamma-slow up to T for the construction shifted to `point`. With
/// `short_circuit`, expansion is only checked at slow points.
GoodReport good_point_report(const HarrisEvents& h, SpaceTimePoint point, const BlockParams& params,
                             double gamma, Time T, bool short_circuit = true);

bool is_good_point(const HarrisEvents& h, SpaceTimePoint point, const BlockParams& params, double gamma,
                   Time T);

}  // namespace cpi
