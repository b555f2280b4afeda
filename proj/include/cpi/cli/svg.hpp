#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cpi::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;  // non-positive y values are skipped
  std::vector<PlotSeries> series;
};

/// Standalone SVG with axes, ticks, one polyline and markers per series.
std::string render_svg(const Plot& p);

/// gnuplot data: one index block per series ("# label" then "x y" rows),
/// blocks separated by two blank lines.
std::string render_dat(const Plot& p);

/// stem.svg and stem.dat, each written atomically.
void write_plot(const std::filesystem::path& stem, const Plot& p);

}  // namespace cpi::cli
