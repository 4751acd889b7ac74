#pragma once

#include <span>
#include <string>
#include <vector>

namespace edgesync {

struct PlotSeries {
    std::string label;
    std::vector<double> values;  // one per time sample
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    std::size_t max_points = 1000;  // per polyline; longer series are subsampled evenly
};

/// Self-contained SVG line chart: frame, ticks, one <polyline> per series and
/// a legend when there are at most 12 series. Output depends only on the
/// inputs, so repeated calls are byte-identical.
std::string render_line_plot(const PlotSpec& spec, std::span<const double> times, std::span<const PlotSeries> series);

}  // namespace edgesync
