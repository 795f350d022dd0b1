#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qsurr {

// Minimal static SVG line plots for the report command: one polyline per
// series with optional error bars, linear or log10 x axis.
struct PlotSeries {
  std::string label;
  std::string color = "#2c7fb8";
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // half-widths; empty = no error bars
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 720;
  int height = 480;
};

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace qsurr
