#pragma once

#include <string>
#include <utility>
#include <vector>

namespace netmirror {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
  bool draw_line = true;
  bool draw_points = false;
};

/// Vertical reference line at x with a text label.
struct SvgMarker {
  std::string label;
  double x = 0.0;
};

/// Deterministic standalone SVG line/point chart; no timestamps, no
/// randomness, byte-identical across runs for identical input.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           const std::vector<SvgMarker>& markers = {});

/// Deterministic histogram of `values` with equal-width bins and optional
/// vertical markers.
std::string svg_histogram(const std::string& title, const std::string& x_label,
                          const std::vector<double>& values, int bins,
                          const std::vector<SvgMarker>& markers = {});

}  // namespace netmirror
