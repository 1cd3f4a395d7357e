#pragma once

#include <string>
#include <vector>

namespace projsq {

// One polyline: equal-length x/y arrays plus a legend label.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal self-contained line chart (fixed 720x480 canvas, axes, ticks,
// legend). Deterministic text output; non-finite points are skipped. Throws
// InvalidArgument when no series contains a finite point.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series);

}  // namespace projsq
