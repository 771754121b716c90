#pragma once
// Minimal hand-rolled SVG output: scatter plots of complex point sets and
// polyline charts. No plotting dependency.

#include <complex>
#include <string>
#include <vector>

namespace rootflow {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
};

/// Scatter of planar points, equal-aspect, auto-scaled with a small margin.
std::string scatter_svg(const std::vector<std::complex<double>>& points,
                        const std::string& title = "");

/// Overlaid polylines with auto-scaled axes.
std::string polyline_svg(const std::vector<SvgSeries>& series, const std::string& title = "");

} // namespace rootflow
