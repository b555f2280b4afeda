#include "cpi/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cpi/montecarlo/store.hpp"

namespace cpi::cli {

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 160, kT = 40, kB = 55;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

// 4-6 round tick positions over [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

}  // namespace

std::string render_svg(const Plot& p) {
  auto ty = [&](double y) { return p.log_y ? std::log10(y) : y; };
  Range xr, yr;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (p.log_y && !(s.y[i] > 0.0)) continue;
      xr.add(s.x[i]);
      yr.add(ty(s.y[i]));
    }
  }
  xr.settle();
  yr.settle();
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto sx = [&](double x) { return kL + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kT + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kL + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(p.title)
    << "</text>\n";
  o << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : ticks(xr.lo, xr.hi)) {
    o << "<line x1=\"" << sx(v) << "\" y1=\"" << kT + ph << "\" x2=\"" << sx(v) << "\" y2=\"" << kT + ph + 5
      << "\" stroke=\"black\"/><text x=\"" << sx(v) << "\" y=\"" << kT + ph + 18 << "\" text-anchor=\"middle\">"
      << num(v) << "</text>\n";
  }
  for (double v : ticks(yr.lo, yr.hi)) {
    o << "<line x1=\"" << kL - 5 << "\" y1=\"" << sy(v) << "\" x2=\"" << kL << "\" y2=\"" << sy(v)
      << "\" stroke=\"black\"/><text x=\"" << kL - 8 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">"
      << (p.log_y ? "1e" + num(v) : num(v)) << "</text>\n";
  }
  o << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << esc(p.xlabel)
    << "</text>\n";
  o << "<text transform=\"translate(16," << kT + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << esc(p.ylabel) << (p.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* c = kColours[k % std::size(kColours)];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (p.log_y && !(s.y[i] > 0.0)) continue;
      pts << sx(s.x[i]) << "," << sy(ty(s.y[i])) << " ";
      o << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(ty(s.y[i])) << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    }
    if (s.line) {
      o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"" << pts.str()
        << "\"/>\n";
    }
    const double ly = kT + 14 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kR + 32 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << c << "\" stroke-width=\"2\"/><text x=\"" << kW - kR + 38 << "\" y=\"" << ly << "\">"
      << esc(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_dat(const Plot& p) {
  std::ostringstream o;
  o.precision(17);
  o << "# " << p.title << "\n# " << p.xlabel << " " << p.ylabel << "\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    if (k > 0) o << "\n\n";
    o << "# " << p.series[k].label << "\n";
    for (std::size_t i = 0; i < p.series[k].x.size(); ++i) o << p.series[k].x[i] << " " << p.series[k].y[i] << "\n";
  }
  return o.str();
}

void write_plot(const std::filesystem::path& stem, const Plot& p) {
  write_file_atomic(std::filesystem::path(stem).concat(".svg"), render_svg(p));
  write_file_atomic(std::filesystem::path(stem).concat(".dat"), render_dat(p));
}

}  // namespace cpi::cli
