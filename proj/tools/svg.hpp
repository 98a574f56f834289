#pragma once

// Static SVG plots: a polyline for curves and a rect heat map for scalar
// slices. Output depends only on the inputs.

#include <Eigen/Core>

#include <ostream>
#include <string>
#include <vector>

namespace winding::cli {

void write_curve_svg(std::ostream& out, const std::vector<Eigen::Vector2d>& points, const std::string& title);

/// values[i * ny + j] is the value at (xs[i], ys[j]).
void write_heatmap_svg(std::ostream& out, const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& values, const std::string& title);

} // namespace winding::cli
