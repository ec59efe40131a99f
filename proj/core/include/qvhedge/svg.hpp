#pragma once

#include <span>
#include <string>
#include <vector>

namespace qvhedge {

enum class SeriesStyle { line, bars };

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  SeriesStyle style = SeriesStyle::line;
  bool secondary_axis = false;  // drawn against the right-hand axis
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string y2_label;
  std::vector<PlotSeries> series;
};

/// SVG 1.1 document with the panels laid out on a grid, `columns` per row.
std::string render_svg(std::span<const PlotPanel> panels, int columns = 2);

}  // namespace qvhedge
