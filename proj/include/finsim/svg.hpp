#pragma once

#include <string>
#include <vector>

namespace finsim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
  bool line = true;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 640;
  int height = 400;
};

/// Minimal standalone SVG: axes with ticks, one polyline (and/or point
/// markers) per series, and a legend.
std::string render_svg(const LinePlot& plot);

}  // namespace finsim
