#include "cpi/contact/interface.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "cpi/contact/evolve.hpp"
#include "cpi/graphical/reach.hpp"

namespace cpi {

bool InterfaceSeries::any_contaminated() const {
  return std::any_of(contaminated.begin(), contaminated.end(), [](bool b) { return b; });
}

InterfaceSeries interface_series(const HarrisEvents& h, std::span<const Time> times) {
  const Window& w = h.window();
  validate_times(w, times);
  if (w.x_min > 0 || w.x_max < 1) throw WindowError("interface_series: window must contain 0 and 1");
  InterfaceSeries out;
  if (times.empty()) return out;

  const int m = h.kernel().range();
  const SiteInterval left{w.x_min, std::min(w.x_max, w.x_min + m - 1)};
  const SiteInterval right{std::max(w.x_min, w.x_max - m + 1), w.x_max};
  enum { kLower = 0, kUpper = 1, kLeft = 2, kRight = 3 };
  const ChannelSpec specs[] = {
      {SpaceTimeRegion::at_time(SiteSet{{w.x_min, 0}}, 0.0), std::nullopt},
      {SpaceTimeRegion::at_time(SiteSet::from_interval(w.sites()), 0.0), std::nullopt},
      {SpaceTimeRegion::band(SiteSet::from_interval(left), 0.0, times.back()), std::nullopt},
      {SpaceTimeRegion::band(SiteSet::from_interval(right), 0.0, times.back()), std::nullopt},
  };
  Sweep sweep(h, specs);

  bool lower_right = right.lo <= 0;
  auto visit = [&](const Event& e, std::uint64_t, const Sweep& sw) {
    if (e.is_arrow() && right.contains(e.to) && (sw.mask(e.to) & 1ULL)) lower_right = true;
  };

  for (Time t : times) {
    sweep.advance_to(t, visit);
    const auto r = sweep.rightmost(kLower);
    std::optional<Site> l;
    for (Site x = w.x_min; x <= w.x_max; ++x) {
      const std::uint64_t mk = sweep.mask(x);
      if (((mk >> kLower) & 1ULL) != ((mk >> kUpper) & 1ULL)) {
        l = x;
        break;
      }
    }
    const auto fl = sweep.rightmost(kLeft);
    const auto fr = sweep.leftmost(kRight);
    bool bad = lower_right || !r || !l;
    const Site rv = r.value_or(w.x_min - 1);
    const Site lv = l.value_or(w.x_max + 1);
    if (fl && *fl >= std::min(lv, rv)) bad = true;
    if (fr && *fr <= lv) bad = true;
    const Site rho = rv - lv;
    out.times.push_back(t);
    out.r.push_back(rv);
    out.l.push_back(lv);
    out.rho.push_back(rho);
    out.rho_plus.push_back(std::max(rho, 0));
    out.rho_minus.push_back(std::max(-rho, 0));
    out.contaminated.push_back(bad);
  }
  return out;
}

void write_interface_csv(std::ostream& out, const InterfaceSeries& s) {
  out << "# cpi-interface v1\n" << kInterfaceCsvHeader << '\n';
  char buf[40];
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.times[i]);
    out << buf << ',' << s.r[i] << ',' << s.l[i] << ',' << s.rho[i] << ',' << s.rho_plus[i] << ','
        << s.rho_minus[i] << ',' << (s.contaminated[i] ? 1 : 0) << '\n';
  }
}

}  // namespace cpi
