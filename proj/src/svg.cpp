#include "curvmass/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace curvmass::svg {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 46;
constexpr int kMarginBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// round the raw span to 1/2/5 ticks
double tick_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

void escape_into(std::ostringstream& os, const std::string& s) {
  for (char c : s) {
    switch (c) {
      case '&': os << "&amp;"; break;
      case '<': os << "&lt;"; break;
      case '>': os << "&gt;"; break;
      default: os << c;
    }
  }
}

}  // namespace

std::string LineChart::render() const {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series_) {
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!(x_lo < x_hi)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (!(y_lo < y_hi)) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = 0.06 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">";
  escape_into(os, title_);
  os << "</text>\n";

  // grid + ticks
  const double xs = tick_step(x_hi - x_lo);
  const double ys = tick_step(y_hi - y_lo);
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double v = std::ceil(x_lo / xs) * xs; v <= x_hi + 1e-12 * xs; v += xs) {
    const double X = px(v);
    os << "<line x1=\"" << fmt(X) << "\" y1=\"" << kMarginTop << "\" x2=\""
       << fmt(X) << "\" y2=\"" << kMarginTop + plot_h
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt(X) << "\" y=\"" << kMarginTop + plot_h + 16
       << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  for (double v = std::ceil(y_lo / ys) * ys; v <= y_hi + 1e-12 * ys; v += ys) {
    const double Y = py(v);
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(Y) << "\" x2=\""
       << kMarginLeft + plot_w << "\" y2=\"" << fmt(Y)
       << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(Y + 4)
       << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  os << "</g>\n";

  os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
     << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
     << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (std::size_t i = 0; i < series_.size(); ++i) {
    const auto& s = series_[i];
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("LineChart: series x/y size mismatch");
    os << "<polyline fill=\"none\" stroke=\""
       << kPalette[i % (sizeof kPalette / sizeof kPalette[0])]
       << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.y[k])) continue;
      os << fmt(px(s.x[k])) << ',' << fmt(py(s.y[k])) << ' ';
    }
    os << "\"/>\n";
  }

  // legend
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series_.size(); ++i) {
    const double Y = kMarginTop + 14 + 16 * static_cast<double>(i);
    os << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << fmt(Y - 4)
       << "\" x2=\"" << kMarginLeft + 34 << "\" y2=\"" << fmt(Y - 4)
       << "\" stroke=\"" << kPalette[i % (sizeof kPalette / sizeof kPalette[0])]
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kMarginLeft + 40 << "\" y=\"" << fmt(Y) << "\">";
    escape_into(os, series_[i].label);
    os << "</text>\n";
  }
  os << "</g>\n";

  os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">";
  escape_into(os, x_label_);
  os << "</text>\n";
  os << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << kMarginTop + plot_h / 2 << ")\">";
  escape_into(os, y_label_);
  os << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace curvmass::svg
