#include "cpi/graphical/brute_force.hpp"

#include <sstream>
#include <vector>

namespace cpi {
namespace {

struct PathSearch {
  const std::vector<Event>& ev;
  SpaceTimePoint to;
  const std::optional<SiteSet>& inside;

  bool allowed(Site x) const { return !inside || inside->contains(x); }

  // Death at `site` with index in [first, last) and time <= limit?
  bool killed(Site site, std::size_t first, std::size_t last, Time limit) const {
    for (std::size_t k = first; k < last && k < ev.size(); ++k) {
      if (ev[k].time > limit) break;
      if (ev[k].is_death() && ev[k].from == site) return true;
    }
    return false;
  }

  // The path sits at `site`; events with index >= `first` have not happened yet.
  bool search(Site site, std::size_t first) const {
    if (site == to.site && !killed(site, first, ev.size(), to.time)) return true;
    for (std::size_t j = first; j < ev.size() && ev[j].time <= to.time; ++j) {
      const Event& e = ev[j];
      if (!e.is_arrow() || e.from != site || !allowed(e.to)) continue;
      if (killed(site, first, j, to.time)) break;
      if (search(e.to, j + 1)) return true;
    }
    return false;
  }
};

}  // namespace

bool brute_force_connects(const HarrisEvents& h, SpaceTimePoint from, SpaceTimePoint to,
                          const std::optional<SiteSet>& inside, std::size_t cap) {
  if (h.size() > cap) {
    std::ostringstream os;
    os << "brute_force_connects: " << h.size() << " events exceed the oracle cap " << cap;
    throw InvalidArgument(os.str());
  }
  if (to.time < from.time) throw InvalidArgument("brute_force_connects: to.time < from.time");
  if (inside && (!inside->contains(from.site) || !inside->contains(to.site))) return false;
  if (to.time == from.time) return from.site == to.site;

  const std::vector<Event> ev = h.events();
  std::size_t first = 0;
  while (first < ev.size() && ev[first].time < from.time) ++first;
  // A death exactly at the start instant does not remove the start point.
  std::vector<Event> trimmed(ev.begin(), ev.begin() + static_cast<std::ptrdiff_t>(first));
  for (std::size_t k = first; k < ev.size(); ++k) {
    const Event& e = ev[k];
    if (e.time == from.time && e.is_death() && e.from == from.site) continue;
    trimmed.push_back(e);
  }
  PathSearch search{trimmed, to, inside};
  return search.search(from.site, first);
}

}  // namespace cpi
