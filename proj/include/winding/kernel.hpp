#pragma once

// Mollifier J, the antisymmetric kernel K_eps, the accumulated angle
// theta_eps and the fixed-order quadrature used by every construction.

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace winding {

/// Parameters shared by every construction: the length scale epsilon,
/// the turn exponent m (10^m turns) and the mollifier normalisation.
struct KernelParams {
    double epsilon = 0.1;
    int m = 1;
    double lambda = 0.0;

    /// Builds validated parameters with lambda set to the cached
    /// normalisation constant.
    static KernelParams make(double epsilon, int m = 1);

    /// Throws InvalidArgument unless epsilon > 0, m >= 1, and lambda
    /// normalises the mollifier.
    void validate() const;

    /// 10^m as a double.
    double turns() const;
};

/// 1 / int_{-1}^{1} exp(1/(s^2-1)) ds, computed once by adaptive
/// Gauss-Kronrod refinement to absolute tolerance 1e-12.
double mollifier_normalisation();

/// Adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_depth = 50);

/// Uniform tensor grid over a box. Axis 0 varies slowest in flat indices.
struct Grid {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::size_t> n;

    static Grid make(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> n);
    static Grid line(double lo, double hi, std::size_t n);
    /// Cube [lo, hi]^dim with n nodes per axis.
    static Grid cube(std::size_t dim, double lo, double hi, std::size_t n);

    void validate() const;
    std::size_t dim() const { return n.size(); }
    double spacing(std::size_t axis) const;
    double node(std::size_t axis, std::size_t k) const;
    std::vector<double> axis_nodes(std::size_t axis) const;
    std::size_t node_count() const;
    /// Coordinates of the node with the given flat index.
    std::vector<double> point(std::size_t flat) const;
};

/// Values of a function sampled on every node of a grid.
struct SampledField {
    Grid grid;
    std::vector<double> values;

    void validate() const;
};

/// A sampled field on a one-dimensional grid (J_eps, K_eps, theta_eps, ...).
using ScalarField1D = SampledField;

SampledField sample(const Grid& grid, const std::function<double(std::span<const double>)>& f);
ScalarField1D sample_1d(const Grid& grid, const std::function<double(double)>& f);

/// Per-axis quadrature weights: composite Simpson for an odd node count,
/// composite trapezoid for an even one.
std::vector<double> axis_weights(double lo, double hi, std::size_t n);

/// (sum_i w_i |f_i|^p)^(1/p) with tensor-product axis weights. Rejects p < 1.
double quadrature(const SampledField& field, double p = 1.0);

/// Signed integral sum_i w_i f_i with tensor-product axis weights.
double integrate(const SampledField& field);

/// J(s) = lambda * exp(1/(s^2-1)) on |s| < 1, zero elsewhere.
double mollifier(double s, const KernelParams& params);

/// J_eps(x) = J(x/eps)/eps.
double mollifier_scaled(double x, const KernelParams& params);

/// Normalised mollifier CDF F(t) = int_{-1}^{t} J(s) ds, with F(-1) = 0
/// and F(1) = 1 exactly.
double mollifier_cdf(double t);

/// K_eps(x) = J_eps(x + eps) - J_eps(x - eps). Odd, supported on [-2eps, 2eps].
double kernel_K(double x, const KernelParams& params);

/// theta_eps(x) = 10^m * 2pi * int_{-inf}^{x} K_eps. Zero for |x| >= 2eps,
/// even in x, maximal (2pi * 10^m) at x = 0.
double angle_theta(double x, const KernelParams& params);

/// theta_eps'(x) = 2pi * 10^m * K_eps(x), signed.
double angle_rate(double x, const KernelParams& params);

inline constexpr double two_pi = 2.0 * std::numbers::pi;

} // namespace winding
