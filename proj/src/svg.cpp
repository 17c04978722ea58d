#include "dwell/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dwell {

void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, bool logy) {
  const int W = 800, H = 520, mL = 70, mR = 20, mT = 40, mB = 50;
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (logy) {
        if (!(yv > 0.0)) continue;
        yv = std::log10(yv);
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto X = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
  auto Y = [&](double y) { return H - mB - (y - ymin) / (ymax - ymin) * (H - mT - mB); };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("svg: cannot open for writing: " + path);
  f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  f << "<rect width='100%' height='100%' fill='white'/>\n";
  f << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
    << "</text>\n";
  f << "<text x='" << W / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='13'>"
    << xlabel << "</text>\n";
  f << "<text x='18' y='" << H / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
    << H / 2 << ")'>" << ylabel << (logy ? " (log10)" : "") << "</text>\n";
  f << "<rect x='" << mL << "' y='" << mT << "' width='" << W - mL - mR << "' height='"
    << H - mT - mB << "' fill='none' stroke='black'/>\n";
  for (const auto& s : series) {
    f << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.2' points='";
    for (size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (logy) {
        if (!(yv > 0.0)) continue;
        yv = std::log10(yv);
      }
      f << X(s.x[i]) << "," << Y(yv) << " ";
    }
    f << "'/>\n";
  }
  f << "</svg>\n";
}

}  // namespace dwell
