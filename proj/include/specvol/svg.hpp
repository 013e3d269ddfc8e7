#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specvol {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart: one polyline per series, a frame, axis extents and a legend.
void write_svg_lines(std::ostream& os, const std::string& title,
                     const std::vector<SvgSeries>& series, int width = 640, int height = 420);

} // namespace specvol
