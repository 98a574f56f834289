#include "winding/hyper.hpp"

#include "winding/error.hpp"
#include "winding/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

namespace winding {

SphericalGaussField SphericalGaussField::make(std::size_t dim, const KernelParams& params,
                                              std::size_t nodes_per_eps) {
    if (nodes_per_eps < 1) throw InvalidArgument("nodes_per_eps must be >= 1");
    const double half = 2.0 * params.epsilon;
    SphericalGaussField f{dim, params, Grid::cube(dim, -half, half, 4 * nodes_per_eps + 1)};
    f.validate();
    return f;
}

void SphericalGaussField::validate() const {
    if (dim < 1) throw InvalidArgument("field dimension must be >= 1");
    params.validate();
    grid.validate();
    if (grid.dim() != dim) throw InvalidArgument("field grid dimension does not match d");
    const double half = 2.0 * params.epsilon * (1.0 - 1e-12);
    for (std::size_t a = 0; a < dim; ++a) {
        if (grid.lo[a] > -half || grid.hi[a] < half) {
            throw InvalidArgument("field grid must cover [-2eps, 2eps] on axis " + std::to_string(a));
        }
    }
}

double sphere_volume(std::size_t d) {
    const double k = 0.5 * static_cast<double>(d + 1);
    return 2.0 * std::pow(std::numbers::pi, k) / std::tgamma(k);
}

namespace {

void check_point(std::span<const double> x, const SphericalGaussField& field) {
    if (x.size() != field.dim) {
        throw InvalidArgument("point has " + std::to_string(x.size()) + " coordinates, field has d = " +
                              std::to_string(field.dim));
    }
}

struct Angles {
    std::vector<double> s, c, rate;
};

Angles angles_at(std::span<const double> x, const KernelParams& params) {
    Angles a;
    a.s.resize(x.size());
    a.c.resize(x.size());
    a.rate.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = angle_theta(x[i], params);
        a.s[i] = std::sin(t);
        a.c[i] = std::cos(t);
        a.rate[i] = angle_rate(x[i], params);
    }
    return a;
}

// Component j of n is prod_{k<j} sin T_k times cos T_j (j < d) or times
// nothing (j = d). `diff` selects the angle to differentiate, or none.
double component(const Angles& a, std::size_t j, std::size_t diff) {
    const std::size_t d = a.s.size();
    const std::size_t none = d;
    double v = 1.0;
    for (std::size_t k = 0; k < std::min(j, d); ++k) v *= (k == diff) ? a.c[k] : a.s[k];
    if (j < d) v *= (j == diff) ? -a.s[j] : a.c[j];
    if (diff != none && diff > j) return 0.0;
    return v;
}

} // namespace

Eigen::VectorXd gauss_map_nd(std::span<const double> x, const SphericalGaussField& field) {
    check_point(x, field);
    const Angles a = angles_at(x, field.params);
    Eigen::VectorXd n(field.dim + 1);
    for (std::size_t j = 0; j <= field.dim; ++j) n[j] = component(a, j, field.dim);
    return n;
}

Eigen::MatrixXd jacobian_rows(std::span<const double> x, const SphericalGaussField& field) {
    check_point(x, field);
    const Angles a = angles_at(x, field.params);
    const std::size_t d = field.dim;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(d, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        if (a.rate[i] == 0.0) continue;
        for (std::size_t j = (i == 0 ? 0 : i - 1); j <= d; ++j) {
            rows(i, j) = a.rate[i] * component(a, j, i);
        }
    }
    return rows;
}

double jacobian_frobenius(std::span<const double> x, const SphericalGaussField& field) {
    check_point(x, field);
    const Angles a = angles_at(x, field.params);
    double sum = 0.0;
    double prefix = 1.0;
    for (std::size_t i = 0; i < field.dim; ++i) {
        sum += a.rate[i] * a.rate[i] * prefix;
        prefix *= a.s[i] * a.s[i];
    }
    return std::sqrt(sum);
}

double second_form_norm(std::span<const double> x, const SphericalGaussField& field) {
    check_point(x, field);
    double sum = 0.0;
    for (double xi : x) {
        const double r = angle_rate(xi, field.params);
        sum += r * r;
    }
    return std::sqrt(sum);
}

double degree_integrand(std::span<const double> x, const SphericalGaussField& field) {
    const std::size_t d = field.dim;
    Eigen::MatrixXd m(d + 1, d + 1);
    m.row(0) = gauss_map_nd(x, field).transpose();
    m.bottomRows(d) = jacobian_rows(x, field);
    return m.determinant();
}

double degree_integrand_closed_form(std::span<const double> x, const SphericalGaussField& field) {
    check_point(x, field);
    const Angles a = angles_at(x, field.params);
    const std::size_t d = field.dim;
    double v = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        v *= a.rate[i];
        for (std::size_t p = 0; p + i + 1 < d; ++p) v *= a.s[i];
    }
    return v;
}

namespace {

// sum over the tensor grid of prod_a w_a[k_a] * g(sum_a r_a[k_a]^2), with
// the outermost axis split across workers.
template <typename G>
double tensor_radial_sum(const std::vector<double>& w, const std::vector<double>& sq,
                         std::size_t d, G&& g) {
    const std::size_t n = w.size();
    std::vector<double> partial(n, 0.0);
    parallel_for(n, [&](std::size_t k0) {
        if (w[k0] == 0.0) return;
        std::vector<std::size_t> idx(d, 0);
        idx[0] = k0;
        double acc = 0.0;
        if (d == 1) {
            acc = g(sq[k0]);
        } else {
            // Odometer over axes 1..d-1, innermost axis as a contiguous loop.
            for (;;) {
                double outer_w = 1.0;
                double outer_sq = sq[k0];
                for (std::size_t a = 1; a + 1 < d; ++a) {
                    outer_w *= w[idx[a]];
                    outer_sq += sq[idx[a]];
                }
                double row = 0.0;
                for (std::size_t k = 0; k < n; ++k) row += w[k] * g(outer_sq + sq[k]);
                acc += outer_w * row;
                std::size_t a = d - 1;
                while (a-- > 1) {
                    if (++idx[a] < n) break;
                    idx[a] = 0;
                }
                if (a == 0 || d == 2) break;
            }
        }
        partial[k0] = w[k0] * acc;
    });
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double ld_power_sum(const std::vector<double>& rates, double lo, double hi, std::size_t d) {
    const auto w = axis_weights(lo, hi, rates.size());
    std::vector<double> sq(rates.size());
    for (std::size_t k = 0; k < rates.size(); ++k) sq[k] = rates[k] * rates[k];
    switch (d) {
    case 1: return tensor_radial_sum(w, sq, d, [](double s) { return std::sqrt(s); });
    case 2: return tensor_radial_sum(w, sq, d, [](double s) { return s; });
    case 3: return tensor_radial_sum(w, sq, d, [](double s) { return s * std::sqrt(s); });
    default: return tensor_radial_sum(w, sq, d, [](double s) { return s * s; });
    }
}

void check_cubic(const SphericalGaussField& field) {
    for (std::size_t a = 1; a < field.dim; ++a) {
        if (field.grid.n[a] != field.grid.n[0] || field.grid.lo[a] != field.grid.lo[0] ||
            field.grid.hi[a] != field.grid.hi[0]) {
            throw InvalidArgument("L^d quadrature needs the same grid on every axis");
        }
    }
}

} // namespace

LdNormReport ld_norm_identity(const SphericalGaussField& field) {
    field.validate();
    if (field.dim > 4) throw InvalidArgument("L^d quadrature supports d <= 4");
    check_cubic(field);
    const double eps = field.params.epsilon;
    const double h = field.grid.spacing(0);
    if (h > eps / 100.0 * (1.0 + 1e-9)) {
        throw InvalidArgument("grid spacing " + std::to_string(h) + " exceeds eps/100 = " +
                              std::to_string(eps / 100.0) + " (under-resolved)");
    }
    const std::size_t d = field.dim;
    const auto xs = field.grid.axis_nodes(0);
    std::vector<double> rates(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) rates[k] = angle_rate(xs[k], field.params);

    // Every other node of the same axis.
    std::vector<double> coarse;
    for (std::size_t k = 0; k < rates.size(); k += 2) coarse.push_back(rates[k]);
    const bool aligned = rates.size() % 2 == 1;
    const double lo = field.grid.lo[0];
    const double hi = aligned ? field.grid.hi[0] : xs[2 * (coarse.size() - 1)];

    const double dd = static_cast<double>(d);
    LdNormReport r;
    r.dim = d;
    r.epsilon = eps;
    r.m = field.params.m;
    r.nodes_per_axis = rates.size();
    r.ld_norm = std::pow(ld_power_sum(rates, lo, field.grid.hi[0], d), 1.0 / dd);
    r.ld_norm_coarse = std::pow(ld_power_sum(coarse, lo, hi, d), 1.0 / dd);

    SampledField k_abs{Grid::line(lo, field.grid.hi[0], xs.size()), {}};
    k_abs.values.resize(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) k_abs.values[k] = kernel_K(xs[k], field.params);
    const double k_l1 = quadrature(k_abs, 1.0);
    r.factored = field.params.turns() * two_pi * std::pow(std::pow(k_l1, dd), 1.0 / dd);
    r.target = 2.0 * two_pi * field.params.turns();
    r.relative_error = std::abs(r.ld_norm / r.target - 1.0);
    r.factored_relative_error = std::abs(r.factored / r.target - 1.0);

    const double drift = std::abs(r.ld_norm - r.ld_norm_coarse) / r.ld_norm;
    if (!(drift <= 1e-3)) {
        throw ResolutionError("L^d norm changes by " + std::to_string(drift) +
                              " relative between resolutions (limit 1e-3)");
    }
    return r;
}

nlohmann::json to_json(const LdNormReport& r) {
    return {{"d", r.dim},
            {"epsilon", r.epsilon},
            {"m", r.m},
            {"ld_norm", r.ld_norm},
            {"ld_norm_coarse", r.ld_norm_coarse},
            {"factored", r.factored},
            {"target", r.target},
            {"relative_error", r.relative_error},
            {"factored_relative_error", r.factored_relative_error},
            {"nodes_per_axis", r.nodes_per_axis}};
}

double sup_second_form_norm(const SphericalGaussField& field) {
    field.validate();
    double best = 0.0;
    for (std::size_t a = 0; a < field.dim; ++a) {
        double axis_max = 0.0;
        for (double x : field.grid.axis_nodes(a)) {
            axis_max = std::max(axis_max, std::abs(angle_rate(x, field.params)));
        }
        best += axis_max * axis_max;
    }
    return std::sqrt(best);
}

FieldSummary summarise_field(const SphericalGaussField& field) {
    FieldSummary s;
    s.dim = field.dim;
    s.epsilon = field.params.epsilon;
    s.m = field.params.m;
    s.ld_norm = ld_norm_identity(field).ld_norm;
    s.sup_norm = sup_second_form_norm(field);
    // The closed-form density is a product of one-variable factors, so its
    // tensor quadrature is the product of axis quadratures.
    const std::size_t d = field.dim;
    double total = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
        const auto xs = field.grid.axis_nodes(a);
        const auto w = axis_weights(field.grid.lo[a], field.grid.hi[a], xs.size());
        double axis = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double t = angle_theta(xs[k], field.params);
            axis += w[k] * angle_rate(xs[k], field.params) *
                    std::pow(std::sin(t), static_cast<double>(d - a - 1));
        }
        total *= axis;
    }
    s.total_degree_integral = total;
    return s;
}

nlohmann::json to_json(const FieldSummary& s) {
    return {{"d", s.dim},
            {"epsilon", s.epsilon},
            {"m", s.m},
            {"ld_norm", s.ld_norm},
            {"sup_norm", s.sup_norm},
            {"total_degree_integral", s.total_degree_integral}};
}

void write_field_csv(std::ostream& out, const SphericalGaussField& field, const Grid& export_grid) {
    field.validate();
    export_grid.validate();
    if (export_grid.dim() != field.dim) throw InvalidArgument("export grid dimension does not match d");
    for (std::size_t a = 0; a < field.dim; ++a) out << 'x' << (a + 1) << ',';
    out << "ii,degree\n";
    char buf[64];
    for (std::size_t i = 0; i < export_grid.node_count(); ++i) {
        const auto x = export_grid.point(i);
        for (double v : x) {
            std::snprintf(buf, sizeof buf, "%.17g,", v);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g,", second_form_norm(x, field));
        out << buf;
        std::snprintf(buf, sizeof buf, "%.17g\n", degree_integrand_closed_form(x, field));
        out << buf;
    }
}

} // namespace winding
