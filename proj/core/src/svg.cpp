#include "qvhedge/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qvhedge {

namespace {

constexpr double kPanelWidth = 520.0;
constexpr double kPanelHeight = 360.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 70.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 50.0;

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      const double w = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
      lo -= w;
      hi += w;
    } else {
      const double w = 0.04 * (hi - lo);
      lo -= w;
      hi += w;
    }
  }
};

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string tick_label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", std::abs(v) < 1e-14 ? 0.0 : v);
  return buffer;
}

void render_panel(std::ostringstream& os, const PlotPanel& panel, double ox, double oy) {
  Extent xs, ys, y2s;
  for (const auto& s : panel.series) {
    for (double v : s.x) xs.add(v);
    for (double v : s.y) (s.secondary_axis ? y2s : ys).add(v);
    if (s.style == SeriesStyle::bars) (s.secondary_axis ? y2s : ys).add(0.0);
  }
  xs.pad();
  ys.pad();
  const bool has_secondary = !y2s.empty();
  y2s.pad();

  const double left = ox + kMarginLeft;
  const double right = ox + kPanelWidth - kMarginRight;
  const double top = oy + kMarginTop;
  const double bottom = oy + kPanelHeight - kMarginBottom;
  auto px = [&](double x) { return left + (x - xs.lo) / (xs.hi - xs.lo) * (right - left); };
  auto py = [&](double y, const Extent& e) {
    return bottom - (y - e.lo) / (e.hi - e.lo) * (bottom - top);
  };

  os << "<g>\n";
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(oy + 22)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(panel.title) << "</text>\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left)
     << "\" height=\"" << num(bottom - top) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xs.lo + (xs.hi - xs.lo) * i / 4.0;
    const double fy = ys.lo + (ys.hi - ys.lo) * i / 4.0;
    os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(bottom + 16)
       << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(fx) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(fy, ys) + 3)
       << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(fy) << "</text>\n";
    if (has_secondary) {
      const double fy2 = y2s.lo + (y2s.hi - y2s.lo) * i / 4.0;
      os << "<text x=\"" << num(right + 6) << "\" y=\"" << num(py(fy2, y2s) + 3)
         << "\" font-size=\"10\" fill=\"#888\">" << tick_label(fy2) << "</text>\n";
    }
  }
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 36)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(ox + 16) << "," << num((top + bottom) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.y_label)
     << "</text>\n";
  if (has_secondary) {
    os << "<text transform=\"translate(" << num(ox + kPanelWidth - 12) << ","
       << num((top + bottom) / 2) << ") rotate(90)\" text-anchor=\"middle\" font-size=\"12\""
       << " fill=\"#888\">" << escape(panel.y2_label) << "</text>\n";
  }

  // Secondary (background) series first so the payoff curves draw on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& s : panel.series) {
      if (s.secondary_axis != (pass == 0)) continue;
      const Extent& e = s.secondary_axis ? y2s : ys;
      const std::size_t n = std::min(s.x.size(), s.y.size());
      if (s.style == SeriesStyle::bars) {
        const double w = n > 1 ? (s.x[1] - s.x[0]) : (xs.hi - xs.lo) / 20.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double x0 = px(s.x[i] - w / 2);
          const double x1 = px(s.x[i] + w / 2);
          const double y0 = py(0.0, e);
          const double y1 = py(s.y[i], e);
          os << "<rect x=\"" << num(x0) << "\" y=\"" << num(std::min(y0, y1)) << "\" width=\""
             << num(x1 - x0) << "\" height=\"" << num(std::abs(y1 - y0)) << "\" fill=\""
             << s.color << "\" fill-opacity=\"0.45\"/>\n";
        }
      } else {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; ++i) {
          if (!std::isfinite(s.y[i])) continue;
          os << num(px(s.x[i])) << "," << num(py(s.y[i], e)) << " ";
        }
        os << "\"/>\n";
      }
    }
  }

  double legend_y = top + 14;
  for (const auto& s : panel.series) {
    os << "<rect x=\"" << num(left + 8) << "\" y=\"" << num(legend_y - 8)
       << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << num(left + 22) << "\" y=\"" << num(legend_y)
       << "\" font-size=\"11\">" << escape(s.name) << "</text>\n";
    legend_y += 14;
  }
  os << "</g>\n";
}

}  // namespace

std::string render_svg(std::span<const PlotPanel> panels, int columns) {
  columns = std::max(1, columns);
  const int count = static_cast<int>(panels.size());
  const int cols = std::min(columns, std::max(1, count));
  const int rows = std::max(1, (count + cols - 1) / cols);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << num(cols * kPanelWidth) << "\" height=\"" << num(rows * kPanelHeight) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g font-family=\"sans-serif\">\n";
  for (int i = 0; i < count; ++i) {
    render_panel(os, panels[i], (i % cols) * kPanelWidth, (i / cols) * kPanelHeight);
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qvhedge
