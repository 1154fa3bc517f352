/// @file svgplot.hpp
/// @brief Self-contained SVG emitters: line plots (linear or log scale),
///        parametric curves, and cell heatmaps, with provenance footers.

#pragma once

#include <string>
#include <vector>

namespace ekman {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;  // reference curves are drawn dashed
};

struct SvgOptions {
    int width = 720, height = 480;
    std::string title, xlabel, ylabel;
    std::string footer;  // provenance line, drawn small in the bottom corner
    bool logy = false;   // log scale on y; non-positive samples are dropped
};

/// Line plot with axes, ticks, and a legend when labels are present.
/// With no drawable points the canvas carries a centered "no data" notice.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const SvgOptions& opt);

/// Heatmap of nx-by-ny values stored as v[i + nx*j]; the color scale is
/// symmetric blue-white-red around zero and the range is printed.
std::string svg_heatmap(const std::vector<double>& v, int nx, int ny,
                        const SvgOptions& opt);

}  // namespace ekman
