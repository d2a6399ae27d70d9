#pragma once

#include <string>
#include <vector>

namespace axsim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  // empty: palette
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 800;
  int height = 480;
  std::vector<PlotSeries> series;
};

/// Static SVG line plot. Series are decimated to at most ~4000 points each
/// (min/max per column, so peaks survive). Non-positive values are dropped
/// on log axes.
std::string line_plot_svg(const PlotSpec& spec);

}  // namespace axsim
