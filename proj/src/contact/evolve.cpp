#include "cpi/contact/evolve.hpp"

#include "cpi/graphical/reach.hpp"

namespace cpi {

void validate_times(const Window& w, std::span<const Time> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || times[i] > w.t_max) {
      throw WindowError("sample time outside [0, t_max]");
    }
    if (i > 0 && times[i] < times[i - 1]) throw InvalidArgument("sample times must be increasing");
  }
}

Trajectory evolve(const HarrisEvents& h, const Configuration& init, std::span<const Time> times) {
  return couple(h, std::span<const Configuration>(&init, 1), times).front();
}

std::vector<Trajectory> couple(const HarrisEvents& h, std::span<const Configuration> inits,
                               std::span<const Time> times) {
  const Window& w = h.window();
  validate_times(w, times);
  if (inits.empty() || inits.size() > 62) throw InvalidArgument("couple: need 1..62 initial conditions");
  for (const auto& c : inits) c.validate(w);

  std::vector<Trajectory> out(inits.size());
  for (std::size_t i = 0; i < inits.size(); ++i) {
    out[i].init = inits[i];
    out[i].window = w;
    out[i].times.assign(times.begin(), times.end());
  }
  if (times.empty()) return out;

  const int m = h.kernel().range();
  const SiteInterval left{w.x_min, std::min(w.x_max, w.x_min + m - 1)};
  const SiteInterval right{std::max(w.x_min, w.x_max - m + 1), w.x_max};
  const int n = static_cast<int>(inits.size());
  const int ch_left = n;
  const int ch_right = n + 1;

  std::vector<ChannelSpec> specs;
  for (const auto& c : inits) specs.push_back({SpaceTimeRegion::at_time(c.sites, 0.0), std::nullopt});
  specs.push_back({SpaceTimeRegion::band(SiteSet::from_interval(left), 0.0, times.back()), std::nullopt});
  specs.push_back({SpaceTimeRegion::band(SiteSet::from_interval(right), 0.0, times.back()), std::nullopt});
  Sweep sweep(h, specs);

  const std::uint64_t init_bits = (n == 64 ? ~0ULL : (1ULL << n) - 1);
  std::uint64_t touched_left = 0;
  std::uint64_t touched_right = 0;
  for (int i = 0; i < n; ++i) {
    const SiteSet& s = inits[static_cast<std::size_t>(i)].sites;
    if (!s.intersect(left).empty()) touched_left |= 1ULL << i;
    if (!s.intersect(right).empty()) touched_right |= 1ULL << i;
  }
  auto visit = [&](const Event& e, std::uint64_t, const Sweep& sw) {
    if (!e.is_arrow()) return;
    if (left.contains(e.to)) touched_left |= sw.mask(e.to) & init_bits;
    if (right.contains(e.to)) touched_right |= sw.mask(e.to) & init_bits;
  };

  for (Time t : times) {
    sweep.advance_to(t, visit);
    const auto fl = sweep.rightmost(ch_left);
    const auto fr = sweep.leftmost(ch_right);
    for (int i = 0; i < n; ++i) {
      Trajectory& tr = out[static_cast<std::size_t>(i)];
      const auto sites = sweep.reached_sites(i);
      Configuration c{SiteSet::from_sites(sites), tr.init.left_filled, tr.init.right_filled};
      const auto lo = sweep.leftmost(i);
      const auto hi = sweep.rightmost(i);
      bool bad = false;
      if (tr.init.left_filled) {
        bad |= !hi || (fl && *fl >= *hi);
      } else {
        bad |= (touched_left >> i) & 1ULL;
      }
      if (tr.init.right_filled) {
        bad |= !lo || (fr && *fr <= *lo);
      } else {
        bad |= (touched_right >> i) & 1ULL;
      }
      tr.boundary_contaminated |= bad;
      tr.states.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace cpi
