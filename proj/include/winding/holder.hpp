#pragma once

// Local graph fits over the mean-normal plane and log-log oscillation
// regression for Holder exponents.

#include "winding/chordarc.hpp"
#include "winding/manifold.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace winding {

struct GraphFit {
    std::size_t centre = 0;
    double radius = 0.0;
    /// Unit direction of the mean normal over the ball.
    Eigen::Vector3d base_normal = Eigen::Vector3d::UnitZ();
    double mean_normal_norm = 1.0;
    /// 1 for graphs over a line, 2 over a plane.
    int footprint_dim = 1;
    /// Typical sample spacing h; tol_xy = h/2.
    double spacing = 0.0;
    double tol_xy = 0.0;
    double tol_z = 0.0;
    bool graph_ok = false;
    std::vector<std::size_t> members;
    std::vector<Eigen::Vector2d> footprints;
    std::vector<double> heights;
};

/// Projects the geodesic ball B(centre, radius) onto the plane through the
/// centre orthogonal to the mean normal. Throws InvalidArgument when the
/// ball holds fewer than 8 samples and GeometryError when the mean normal
/// has norm < 0.1.
GraphFit local_graph_fit(const SampledManifold& mani, std::size_t centre, double radius);

/// Graph of samples (u_i, f_i) over a line; the spacing is the median gap
/// between sorted abscissae and tol_z is a tenth of the half-span.
GraphFit graph_from_samples(const std::vector<double>& u, const std::vector<double>& f);

struct HolderEstimate {
    double gamma_hat = 1.0;
    double constant_hat = 0.0;
    std::vector<double> scales;
    std::vector<double> oscillations;
    double r2 = 1.0;
    /// Raw slope fell outside (0, 1] and was clipped.
    bool clipped = false;
    /// Every oscillation vanished; reported as gamma 1, constant 0.
    bool flat = false;
    double raw_slope = 1.0;
};

/// The regression uses scales in [floor * spacing, cap * span]; with fewer
/// than 4 there it falls back to [spacing, span / 4], then to every scale.
inline constexpr double regression_floor_spacings = 8.0;
inline constexpr double regression_cap_fraction = 0.125;

/// Scales halve from half the footprint span down to the sample spacing;
/// oscillation(h) = max |height(u) - height(v)| over pairs with |u - v| <= h.
/// Throws InvalidArgument unless graph_ok, and when fewer than 5 scales
/// carry a nonzero oscillation on a graph that is not flat.
HolderEstimate holder_exponent(const GraphFit& fit);

nlohmann::json to_json(const HolderEstimate& est);

struct BallCheck {
    std::size_t centre = 0;
    double radius = 0.0;
    bool graph_ok = false;
    bool passed = false;
    double gamma_hat = 0.0;
    double constant_hat = 0.0;
    double r2 = 0.0;
    std::string error;
};

struct SystemReport {
    std::vector<BallCheck> balls;
    double min_gamma = 0.0;
    double max_constant = 0.0;
    double pass_fraction = 0.0;
};

/// Fits every ball of the net; failures are recorded per ball.
SystemReport graph_system_check(const SampledManifold& mani, const NetCover& net);

nlohmann::json to_json(const SystemReport& report);

} // namespace winding
