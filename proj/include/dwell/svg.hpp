#pragma once

#include <string>
#include <vector>

namespace dwell {

// Minimal self-contained SVG line plot (one polyline per series).
struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
};

void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, bool logy = false);

}  // namespace dwell
