#include "axsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace axsim {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
constexpr std::size_t kMaxColumns = 2000;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* f = "%.1f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tick_label(double v, bool log) {
  if (log) return "1e" + fmt(std::round(v), "%.0f");
  return fmt(v, "%.3g");
}

struct Point {
  double x;
  double y;
};

// Keeps the first, min and max point of each pixel column.
std::vector<Point> decimate(const std::vector<Point>& pts, double x0, double x1) {
  if (pts.size() <= 2 * kMaxColumns || x1 <= x0) return pts;
  std::vector<Point> out;
  std::size_t i = 0;
  while (i < pts.size()) {
    const auto col = static_cast<long>((pts[i].x - x0) / (x1 - x0) * kMaxColumns);
    Point lo = pts[i];
    Point hi = pts[i];
    std::size_t j = i;
    while (j < pts.size() &&
           static_cast<long>((pts[j].x - x0) / (x1 - x0) * kMaxColumns) == col) {
      if (pts[j].y < lo.y) lo = pts[j];
      if (pts[j].y > hi.y) hi = pts[j];
      ++j;
    }
    out.push_back(pts[i]);
    if (lo.x <= hi.x) {
      out.push_back(lo);
      out.push_back(hi);
    } else {
      out.push_back(hi);
      out.push_back(lo);
    }
    i = j;
  }
  return out;
}

}  // namespace

std::string line_plot_svg(const PlotSpec& spec) {
  const double left = 80, right = 20, top = 40, bottom = 60;
  const double w = spec.width - left - right;
  const double h = spec.height - top - bottom;

  std::vector<std::vector<Point>> data;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : spec.series) {
    std::vector<Point> pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      double x = s.x[k];
      double y = s.y[k];
      if (spec.log_x) {
        if (!(x > 0.0)) continue;
        x = std::log10(x);
      }
      if (spec.log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts.push_back({x, y});
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    data.push_back(std::move(pts));
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
    x1 = x0 + 2.0;
  }
  if (!(y1 > y0)) {
    y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
    y1 = y0 + 2.0;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double fx = x0 + (x1 - x0) * i / 5.0;
    const double fy = y0 + (y1 - y0) * i / 5.0;
    os << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << top + h << "\" x2=\"" << fmt(px(fx))
       << "\" y2=\"" << top << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << top + h + 16
       << "\" text-anchor=\"middle\">" << tick_label(fx, spec.log_x) << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << fmt(py(fy)) << "\" x2=\"" << left + w
       << "\" y2=\"" << fmt(py(fy)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(fy) + 4)
       << "\" text-anchor=\"end\">" << tick_label(fy, spec.log_y) << "</text>\n";
  }
  os << "<text x=\"" << left + w / 2 << "\" y=\"" << spec.height - 16
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = spec.series[i];
    const std::string color =
        s.color.empty() ? kPalette[i % (sizeof kPalette / sizeof *kPalette)] : s.color;
    const auto pts = decimate(data[i], x0, x1);
    if (!pts.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"";
      if (s.dashed) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (const auto& p : pts) os << fmt(px(p.x)) << ',' << fmt(py(p.y)) << ' ';
      os << "\"/>\n";
    }
    const double ly = top + 16 + 16.0 * static_cast<double>(i);
    os << "<line x1=\"" << left + w - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << left + w - 130 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\"/>\n";
    os << "<text x=\"" << left + w - 125 << "\" y=\"" << ly << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace axsim
