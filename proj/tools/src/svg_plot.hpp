#pragma once

#include <string>
#include <vector>

namespace windfarm::cli {

struct Series {
  std::string label;
  std::vector<double> t;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
};

/// Stacked polyline charts, one panel per variable, series overlaid.
std::string render_svg(const std::vector<Panel>& panels);

}  // namespace windfarm::cli
