#include "netmirror/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "netmirror/errors.hpp"

namespace netmirror {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 828.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 460.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt_px(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void pad() {
    if (hi < lo) {
      lo = 0.0;
      hi = 1.0;
      return;
    }
    if (hi == lo) {
      const double half = std::max(1.0, std::abs(hi) * 0.1);
      lo -= half;
      hi += half;
      return;
    }
    const double margin = 0.04 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

Range fresh_range() {
  Range r;
  r.lo = std::numeric_limits<double>::infinity();
  r.hi = -std::numeric_limits<double>::infinity();
  return r;
}

std::vector<double> nice_ticks(const Range& r, int target = 6) {
  const double span = r.hi - r.lo;
  const double raw = span / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double normalized = raw / magnitude;
  double step = 10.0;
  if (normalized < 1.5)
    step = 1.0;
  else if (normalized < 3.5)
    step = 2.0;
  else if (normalized < 7.5)
    step = 5.0;
  step *= magnitude;
  std::vector<double> ticks;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + step * 1e-9; v += step)
    ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  return ticks;
}

class Canvas {
 public:
  Canvas(const std::string& title, const std::string& x_label, const std::string& y_label,
         Range x, Range y)
      : x_(x), y_(y) {
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_tick(kWidth) +
            "\" height=\"" + fmt_tick(kHeight) + "\" viewBox=\"0 0 " + fmt_tick(kWidth) + " " +
            fmt_tick(kHeight) + "\" font-family=\"sans-serif\">\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ += "<text x=\"" + fmt_px(kWidth / 2) +
            "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
    axes(x_label, y_label);
  }

  double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kRight - kLeft); }
  double py(double v) const { return kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kBottom - kTop); }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    if (pts.size() < 2) return;
    out_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) out_ += " ";
      out_ += fmt_px(px(pts[i].first)) + "," + fmt_px(py(pts[i].second));
    }
    out_ += "\"/>\n";
  }

  void circles(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
    for (const auto& [x, y] : pts)
      out_ += "<circle cx=\"" + fmt_px(px(x)) + "\" cy=\"" + fmt_px(py(y)) +
              "\" r=\"3\" fill=\"" + color + "\"/>\n";
  }

  void rect(double x0, double x1, double y_value, const std::string& color) {
    const double top = py(y_value);
    out_ += "<rect x=\"" + fmt_px(px(x0)) + "\" y=\"" + fmt_px(top) + "\" width=\"" +
            fmt_px(px(x1) - px(x0)) + "\" height=\"" + fmt_px(kBottom - top) + "\" fill=\"" +
            color + "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }

  void marker(const SvgMarker& m, int index) {
    const double x = px(m.x);
    const std::string color = kPalette[(index + 1) % kPaletteSize];
    out_ += "<line x1=\"" + fmt_px(x) + "\" y1=\"" + fmt_px(kTop) + "\" x2=\"" + fmt_px(x) +
            "\" y2=\"" + fmt_px(kBottom) + "\" stroke=\"" + color +
            "\" stroke-width=\"1\" stroke-dasharray=\"5,3\"/>\n";
    out_ += "<text x=\"" + fmt_px(x + 4) + "\" y=\"" + fmt_px(kTop + 14.0 * (index + 1)) +
            "\" font-size=\"11\" fill=\"" + color + "\">" + escape(m.label) + "</text>\n";
  }

  void legend_entry(const std::string& label, const std::string& color, int index) {
    const double y = kTop + 10 + 16.0 * index;
    out_ += "<line x1=\"" + fmt_px(kRight - 150) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
            fmt_px(kRight - 126) + "\" y2=\"" + fmt_px(y) + "\" stroke=\"" + color +
            "\" stroke-width=\"2\"/>\n";
    out_ += "<text x=\"" + fmt_px(kRight - 120) + "\" y=\"" + fmt_px(y + 4) +
            "\" font-size=\"11\">" + escape(label) + "</text>\n";
  }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  void axes(const std::string& x_label, const std::string& y_label) {
    out_ += "<line x1=\"" + fmt_px(kLeft) + "\" y1=\"" + fmt_px(kBottom) + "\" x2=\"" +
            fmt_px(kRight) + "\" y2=\"" + fmt_px(kBottom) + "\" stroke=\"black\"/>\n";
    out_ += "<line x1=\"" + fmt_px(kLeft) + "\" y1=\"" + fmt_px(kTop) + "\" x2=\"" +
            fmt_px(kLeft) + "\" y2=\"" + fmt_px(kBottom) + "\" stroke=\"black\"/>\n";
    for (double v : nice_ticks(x_)) {
      const double x = px(v);
      out_ += "<line x1=\"" + fmt_px(x) + "\" y1=\"" + fmt_px(kBottom) + "\" x2=\"" + fmt_px(x) +
              "\" y2=\"" + fmt_px(kBottom + 5) + "\" stroke=\"black\"/>\n";
      out_ += "<text x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(kBottom + 18) +
              "\" font-size=\"11\" text-anchor=\"middle\">" + fmt_tick(v) + "</text>\n";
    }
    for (double v : nice_ticks(y_)) {
      const double y = py(v);
      out_ += "<line x1=\"" + fmt_px(kLeft - 5) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
              fmt_px(kLeft) + "\" y2=\"" + fmt_px(y) + "\" stroke=\"black\"/>\n";
      out_ += "<text x=\"" + fmt_px(kLeft - 8) + "\" y=\"" + fmt_px(y + 4) +
              "\" font-size=\"11\" text-anchor=\"end\">" + fmt_tick(v) + "</text>\n";
    }
    out_ += "<text x=\"" + fmt_px((kLeft + kRight) / 2) + "\" y=\"" + fmt_px(kHeight - 12) +
            "\" font-size=\"13\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    out_ += "<text x=\"18\" y=\"" + fmt_px((kTop + kBottom) / 2) +
            "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
            fmt_px((kTop + kBottom) / 2) + ")\">" + escape(y_label) + "</text>\n";
  }

  Range x_;
  Range y_;
  std::string out_;
};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           const std::vector<SvgMarker>& markers) {
  Range x = fresh_range();
  Range y = fresh_range();
  for (const SvgSeries& s : series) {
    for (const auto& [px_, py_] : s.points) {
      x.expand(px_);
      y.expand(py_);
    }
  }
  for (const SvgMarker& m : markers) x.expand(m.x);
  x.pad();
  y.pad();

  Canvas canvas(title, x_label, y_label, x, y);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string color = kPalette[i % kPaletteSize];
    if (series[i].draw_line) canvas.polyline(series[i].points, color);
    if (series[i].draw_points || series[i].points.size() < 2)
      canvas.circles(series[i].points, color);
  }
  for (std::size_t i = 0; i < markers.size(); ++i)
    canvas.marker(markers[i], static_cast<int>(i));
  if (series.size() > 1)
    for (std::size_t i = 0; i < series.size(); ++i)
      canvas.legend_entry(series[i].label, kPalette[i % kPaletteSize], static_cast<int>(i));
  return canvas.finish();
}

std::string svg_histogram(const std::string& title, const std::string& x_label,
                          const std::vector<double>& values, int bins,
                          const std::vector<SvgMarker>& markers) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (values.empty()) throw DomainError("histogram needs at least one value");

  Range x = fresh_range();
  for (double v : values) x.expand(v);
  for (const SvgMarker& m : markers) x.expand(m.x);
  if (x.hi == x.lo) {
    x.lo -= 0.5;
    x.hi += 0.5;
  }
  const double width = (x.hi - x.lo) / bins;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - x.lo) / width);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    ++counts[static_cast<std::size_t>(b)];
  }

  Range y;
  y.lo = 0.0;
  y.hi = static_cast<double>(*std::max_element(counts.begin(), counts.end())) * 1.05;
  if (y.hi == 0.0) y.hi = 1.0;
  Range padded_x = x;
  padded_x.pad();

  Canvas canvas(title, x_label, "count", padded_x, y);
  for (int b = 0; b < bins; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0) continue;
    canvas.rect(x.lo + b * width, x.lo + (b + 1) * width,
                static_cast<double>(counts[static_cast<std::size_t>(b)]), kPalette[0]);
  }
  for (std::size_t i = 0; i < markers.size(); ++i)
    canvas.marker(markers[i], static_cast<int>(i));
  return canvas.finish();
}

}  // namespace netmirror
