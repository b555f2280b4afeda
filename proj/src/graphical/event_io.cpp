#include "cpi/graphical/event_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cpi {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(int line, const std::string& what) {
  std::ostringstream os;
  os << "events: line " << line << ": " << what;
  throw InvalidArgument(os.str());
}

}  // namespace

void write_events(std::ostream& out, const HarrisEvents& h) {
  const Window& w = h.raw_window();
  out << "# cpi-events v1\n";
  out << "seed " << h.seed() << '\n';
  out << "lambda " << fmt(h.kernel().lambda()) << '\n';
  out << "kernel " << h.kernel().weights_csv() << '\n';
  out << "window " << w.x_min << ' ' << w.x_max << ' ' << fmt(w.t_max) << '\n';
  out << "origin " << h.origin().site << ' ' << fmt(h.origin().time) << '\n';
  // Events before the view origin are kept so the file reproduces the store.
  HarrisEvents unshifted = h.shifted(-h.origin().site, -h.origin().time);
  for (const Event& e : unshifted.raw_events()) {
    if (e.is_death()) {
      out << "D " << e.from << ' ' << fmt(e.time) << '\n';
    } else {
      out << "A " << e.from << ' ' << e.to << ' ' << fmt(e.time) << '\n';
    }
  }
}

HarrisEvents read_events(std::istream& in) {
  std::uint64_t seed = 0;
  double lambda = -1.0;
  std::string kernel_csv;
  Window window{};
  bool have_window = false;
  Origin origin{};
  std::vector<Event> events;

  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    bool ok = true;
    if (tag == "seed") {
      ok = static_cast<bool>(ls >> seed);
    } else if (tag == "lambda") {
      ok = static_cast<bool>(ls >> lambda);
    } else if (tag == "kernel") {
      ok = static_cast<bool>(ls >> kernel_csv);
    } else if (tag == "window") {
      ok = static_cast<bool>(ls >> window.x_min >> window.x_max >> window.t_max);
      have_window = true;
    } else if (tag == "origin") {
      ok = static_cast<bool>(ls >> origin.site >> origin.time);
    } else if (tag == "D") {
      Event e;
      ok = static_cast<bool>(ls >> e.from >> e.time);
      e.to = e.from;
      events.push_back(e);
    } else if (tag == "A") {
      Event e;
      ok = static_cast<bool>(ls >> e.from >> e.to >> e.time);
      if (ok && e.from == e.to) bad(no, "arrow with equal endpoints");
      events.push_back(e);
    } else {
      bad(no, "unknown record '" + tag + "'");
    }
    if (!ok) bad(no, "malformed record");
  }
  if (lambda < 0.0 || kernel_csv.empty() || !have_window) {
    throw InvalidArgument("events: missing lambda, kernel or window header");
  }
  HarrisEvents h =
      HarrisEvents::from_events(Kernel::parse(lambda, kernel_csv), window, std::move(events), seed);
  if (origin == Origin{}) return h;
  return h.shifted(origin.site, origin.time);
}

void dump_events(const std::string& path, const HarrisEvents& h) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("events: cannot write " + path);
  write_events(out, h);
  if (!out.flush()) throw InvalidArgument("events: write failed for " + path);
}

HarrisEvents load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("events: cannot read " + path);
  return read_events(in);
}

}  // namespace cpi
