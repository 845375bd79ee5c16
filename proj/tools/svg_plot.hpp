#pragma once

#include <string>
#include <vector>

namespace cgp::tools {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<double> markers;  // vertical dashed lines at these x values
};

/// Minimal SVG line chart. Non-finite points are skipped.
std::string line_chart(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace cgp::tools
