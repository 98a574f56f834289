#pragma once

// Gauss map in spherical coordinates for general d, its Jacobian, the
// pointwise norm of the second fundamental form, the L^d identity and the
// pullback degree density.

#include "winding/kernel.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace winding {

/// Angle profile Theta(x_i) on every axis, sampled on [-2eps, 2eps]^d.
struct SphericalGaussField {
    std::size_t dim = 1;
    KernelParams params;
    Grid grid;

    /// Grid [-2eps, 2eps]^dim with `nodes_per_eps` cells per epsilon on each
    /// axis (4 * nodes_per_eps + 1 nodes).
    static SphericalGaussField make(std::size_t dim, const KernelParams& params,
                                    std::size_t nodes_per_eps = 100);

    void validate() const;
};

/// Vol(S^d) = 2 pi^((d+1)/2) / Gamma((d+1)/2).
double sphere_volume(std::size_t d);

/// (cos T1, sin T1 cos T2, ..., sin T1 ... sin T_{d-1} sin T_d), T_i = Theta(x_i).
Eigen::VectorXd gauss_map_nd(std::span<const double> x, const SphericalGaussField& field);

/// d x (d+1) matrix whose row i is the derivative of the Gauss map in x_i.
Eigen::MatrixXd jacobian_rows(std::span<const double> x, const SphericalGaussField& field);

/// Frobenius norm of jacobian_rows in closed form:
/// sqrt(sum_i Theta'(x_i)^2 prod_{k<i} sin^2 Theta(x_k)).
double jacobian_frobenius(std::span<const double> x, const SphericalGaussField& field);

/// |(Theta'(x_1), ..., Theta'(x_d))|.
double second_form_norm(std::span<const double> x, const SphericalGaussField& field);

/// det(n, d_1 n, ..., d_d n) evaluated as a (d+1) x (d+1) determinant.
double degree_integrand(std::span<const double> x, const SphericalGaussField& field);

/// prod_i Theta'(x_i) * prod_{k=1}^{d-1} sin^{d-k} Theta(x_k).
double degree_integrand_closed_form(std::span<const double> x, const SphericalGaussField& field);

struct LdNormReport {
    std::size_t dim = 1;
    double epsilon = 0.0;
    int m = 1;
    /// Tensor quadrature of |II|^d over the field grid, then the d-th root.
    double ld_norm = 0.0;
    /// Same quadrature at half the resolution.
    double ld_norm_coarse = 0.0;
    /// 2 pi 10^m (prod_i ||K_eps||_{L^1})^{1/d} from one-dimensional quadrature.
    double factored = 0.0;
    /// 4 pi 10^m.
    double target = 0.0;
    double relative_error = 0.0;
    double factored_relative_error = 0.0;
    std::size_t nodes_per_axis = 0;
};

/// Computes the L^d norm of |II| over the support box. Throws ResolutionError
/// when the full and half resolution values differ by more than 1e-3
/// relative, and InvalidArgument when h > eps/100 or d > 4.
LdNormReport ld_norm_identity(const SphericalGaussField& field);

nlohmann::json to_json(const LdNormReport& report);

/// Largest second_form_norm over the field grid. Every axis shares the same
/// nodes, so this is sqrt(d) * max |Theta'| over one axis.
double sup_second_form_norm(const SphericalGaussField& field);

struct FieldSummary {
    std::size_t dim = 1;
    double epsilon = 0.0;
    int m = 1;
    double ld_norm = 0.0;
    double sup_norm = 0.0;
    double total_degree_integral = 0.0;
};

FieldSummary summarise_field(const SphericalGaussField& field);
nlohmann::json to_json(const FieldSummary& summary);

/// Rows x1..xd,ii,degree on an export grid (usually coarser than the field
/// grid) at 17 significant digits.
void write_field_csv(std::ostream& out, const SphericalGaussField& field, const Grid& export_grid);

} // namespace winding
