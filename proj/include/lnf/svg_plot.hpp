#pragma once

#include <span>
#include <string>

namespace lnf {

struct ChartLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Static line chart: framed axes with tick labels and one polyline.
// Non-finite y values break the line into separate segments.
std::string svg_line_chart(std::span<const double> x, std::span<const double> y,
                           const ChartLabels& labels);

}  // namespace lnf
