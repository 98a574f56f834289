#pragma once

// The planar counterexample: Gauss map, curvature, and an embedded spiral
// that winds 10^m times in, turns through a short neck, and unwinds.

#include "winding/kernel.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace winding {

/// A sampled immersed curve in R^2.
struct SampledCurve {
    KernelParams params;
    std::vector<double> xs;
    std::vector<Eigen::Vector2d> points;
    std::vector<Eigen::Vector2d> normals;
    /// |II| per sample: derivative of the normal field per unit arclength.
    std::vector<double> curvature;
    /// Arclength measure per sample (half of each adjacent segment).
    std::vector<double> arc_weights;

    std::size_t size() const { return xs.size(); }

    /// Builds a curve from samples, computing arc_weights from the polyline.
    static SampledCurve from_samples(KernelParams params, std::vector<double> xs,
                                     std::vector<Eigen::Vector2d> points,
                                     std::vector<Eigen::Vector2d> normals,
                                     std::vector<double> curvature);

    void validate() const;
};

/// Polyline half-segment weights; endpoints carry half of one segment.
std::vector<double> polyline_weights(const std::vector<Eigen::Vector2d>& points);

struct SpiralConfig {
    /// Radius lost per full turn on the incoming arm.
    double radial_step = 0.05;
    /// Radial gap between the incoming and outgoing arms.
    double out_offset = 0.025;
    /// Width (parameter units) of the neck window ending at x = 0.
    double neck_width = 0.01;
    /// Parameter extent of each straight tail.
    double tail_length = 1.0;

    /// radial_step = 10^-m / 2, out_offset = radial_step / 2,
    /// neck_width = eps / 10, tail_length = 10 eps.
    static SpiralConfig defaults(const KernelParams& params);

    void validate(const KernelParams& params) const;
};

/// n_eps(x) = (cos theta_eps(x), sin theta_eps(x)).
Eigen::Vector2d gauss_map_1d(double x, const KernelParams& params);

/// |theta_eps'(x)| = 2pi 10^m |K_eps(x)|.
double curvature_1d(double x, const KernelParams& params);

/// Signed turning rate theta_eps'(x); its integral over a half-line is
/// 2pi times the degree.
double turning_rate_1d(double x, const KernelParams& params);

/// Parameter grid over [-2eps - tail, 2eps + tail] with `density` samples
/// per epsilon.
Grid spiral_grid(const KernelParams& params, const SpiralConfig& cfg, std::size_t density);

/// Position of the spiral at parameter x (no sampling).
Eigen::Vector2d spiral_point(double x, const KernelParams& params, const SpiralConfig& cfg);

/// Samples the spiral on a 1-d grid covering [-2eps - tail, 2eps + tail].
/// Grid nodes at zero computed distance from the previous sample are dropped.
/// Throws InvalidArgument for a bad config or grid and GeometryError if the
/// sampled polyline intersects itself.
SampledCurve build_spiral(const KernelParams& params, const SpiralConfig& cfg, const Grid& grid);

/// Index pair of the first crossing pair of non-adjacent segments, if any.
std::optional<std::pair<std::size_t, std::size_t>>
find_self_intersection(const std::vector<Eigen::Vector2d>& points);

/// True when |points| is nonincreasing for x <= 0 and nondecreasing for
/// x >= 0, up to an absolute slack.
bool radius_monotone(const SampledCurve& curve, double slack = 1e-13);

struct BlowupCentre {
    double x;
    double radius;
};

/// sum_n 2^-n 1_{B(x_n, R_n)}(x) theta_eps(x - x_n), truncated once
/// 2^-n < 1e-12. Balls must be disjoint with radii > 2eps.
double multi_blowup_angle(double x, const std::vector<BlowupCentre>& centres,
                          const KernelParams& params);

struct CurveMeasures {
    double length = 0.0;
    double l1_curvature = 0.0;
    double sup_curvature = 0.0;
};

CurveMeasures curve_measures(const SampledCurve& curve);

/// CSV with header x,px,py,nx,ny,kappa,w at 17 significant digits.
void write_curve_csv(std::ostream& out, const SampledCurve& curve);

/// Parses the curve CSV format. Params are not stored in the file; the
/// returned curve carries default parameters.
SampledCurve read_curve_csv(std::istream& in);

} // namespace winding
