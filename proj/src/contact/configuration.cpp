#include "cpi/contact/configuration.hpp"

namespace cpi {

Configuration Configuration::left_half_line(Site a, const Window& w) {
  return {SiteSet::from_interval({w.x_min, std::min(a, w.x_max)}), true, false};
}

Configuration Configuration::right_half_line(Site b, const Window& w) {
  return {SiteSet::from_interval({std::max(b, w.x_min), w.x_max}), false, true};
}

Configuration Configuration::all(const Window& w) {
  return {SiteSet::from_interval(w.sites()), true, true};
}

void Configuration::validate(const Window& w) const {
  if (!sites.subset_of(w.sites())) throw WindowError("configuration: sites outside window");
  if (left_filled && (sites.empty() || sites.intervals().front().lo != w.x_min)) {
    throw InvalidArgument("configuration: left tail must reach x_min");
  }
  if (right_filled && (sites.empty() || sites.intervals().back().hi != w.x_max)) {
    throw InvalidArgument("configuration: right tail must reach x_max");
  }
}

}  // namespace cpi
