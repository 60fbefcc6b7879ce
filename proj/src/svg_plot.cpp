#include "lnf/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lnf/error.hpp"

namespace lnf {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

std::string svg_line_chart(std::span<const double> x, std::span<const double> y,
                           const ChartLabels& labels) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InputError("line chart needs matching x/y series with at least 2 points");
  }
  double y_lo = INFINITY, y_hi = -INFINITY;
  for (double v : y) {
    if (std::isfinite(v)) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
  if (y_hi - y_lo < 1e-300) y_lo -= 0.5, y_hi += 0.5;
  const double x_lo = x.front(), x_hi = x.back();

  const double y_step = nice_step(y_hi - y_lo, 6);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  const double x_step = nice_step(x_hi - x_lo, 8);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%g", kWidth) +
         "\" height=\"" + fmt("%g", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt("%g", kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(labels.title) + "</text>\n";

  for (double t = std::ceil(x_lo / x_step) * x_step; t <= x_hi + 1e-9 * x_step; t += x_step) {
    const std::string sx = fmt("%.2f", px(t));
    out += "<line x1=\"" + sx + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + sx + "\" y2=\"" +
           fmt("%.2f", kTop + ph) + "\" stroke=\"#ddd\"/>\n";
    out += "<text x=\"" + sx + "\" y=\"" + fmt("%.2f", kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  for (double t = y_lo; t <= y_hi + 1e-9 * y_step; t += y_step) {
    const std::string sy = fmt("%.2f", py(t));
    out += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + sy + "\" x2=\"" +
           fmt("%.2f", kLeft + pw) + "\" y2=\"" + sy + "\" stroke=\"#ddd\"/>\n";
    out += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + sy +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  out += "<rect x=\"" + fmt("%g", kLeft) + "\" y=\"" + fmt("%g", kTop) + "\" width=\"" +
         fmt("%g", pw) + "\" height=\"" + fmt("%g", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt("%g", kLeft + pw / 2) + "\" y=\"" + fmt("%g", kHeight - 16) +
         "\" text-anchor=\"middle\">" + escape(labels.x_label) + "</text>\n";
  out += "<text transform=\"translate(20," + fmt("%g", kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(labels.y_label) + "</text>\n";

  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      out += "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"" + points +
             "\"/>\n";
      points.clear();
    }
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(y[i])) {
      flush();
      continue;
    }
    if (!points.empty()) points += ' ';
    points += fmt("%.2f", px(x[i])) + "," + fmt("%.2f", py(y[i]));
  }
  flush();
  out += "</svg>\n";
  return out;
}

}  // namespace lnf
