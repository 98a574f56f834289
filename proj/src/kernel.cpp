#include "winding/kernel.hpp"

#include "winding/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace winding {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::array<double, 4> kLegendre8Nodes = {
    0.183434642495649804939476142360184, 0.525532409916328985817739049189246,
    0.796666477413626739591553936475830, 0.960289856497536231683560868569473};
constexpr std::array<double, 4> kLegendre8Weights = {
    0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
    0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

struct Gk15 {
    double kronrod;
    double gauss;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double fc = f(c);
    double k = kKronrodWeights[7] * fc;
    double g = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = r * kKronrodNodes[i];
        const double s = f(c - dx) + f(c + dx);
        k += kKronrodWeights[i] * s;
        if (i % 2 == 1) g += kGaussWeights[i / 2] * s;
    }
    return {k * r, g * r};
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int depth) {
    const Gk15 est = gk15(f, a, b);
    if (std::abs(est.kronrod - est.gauss) <= tol || depth <= 0) return est.kronrod;
    const double c = 0.5 * (a + b);
    return adaptive(f, a, c, 0.5 * tol, depth - 1) + adaptive(f, c, b, 0.5 * tol, depth - 1);
}

double bump(double s) {
    return std::abs(s) < 1.0 ? std::exp(1.0 / (s * s - 1.0)) : 0.0;
}

double legendre8(double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double dx = r * kLegendre8Nodes[i];
        sum += kLegendre8Weights[i] * (bump(c - dx) + bump(c + dx));
    }
    return sum * r;
}

// Cumulative table of the unnormalised bump on [-1, 1].
class CdfTable {
public:
    static constexpr std::size_t kCells = 4096;

    CdfTable() : cumulative_(kCells + 1, 0.0) {
        for (std::size_t k = 0; k < kCells; ++k) {
            cumulative_[k + 1] = cumulative_[k] + legendre8(node(k), node(k + 1));
        }
        total_ = cumulative_.back();
    }

    // F(t) for t in [-1, 0]; the upper half follows from symmetry.
    double lower(double t) const {
        if (t <= -1.0) return 0.0;
        const double pos = (t + 1.0) / cell();
        std::size_t k = static_cast<std::size_t>(pos);
        k = std::min(k, kCells - 1);
        return (cumulative_[k] + legendre8(node(k), t)) / total_;
    }

private:
    static double cell() { return 2.0 / static_cast<double>(kCells); }
    static double node(std::size_t k) { return -1.0 + cell() * static_cast<double>(k); }

    std::vector<double> cumulative_;
    double total_ = 1.0;
};

const CdfTable& cdf_table() {
    static const CdfTable table;
    return table;
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    return adaptive(f, a, b, abs_tol, max_depth);
}

double mollifier_normalisation() {
    static const double lambda = 1.0 / integrate_adaptive(bump, -1.0, 1.0, 1e-12);
    return lambda;
}

KernelParams KernelParams::make(double epsilon, int m) {
    KernelParams p{epsilon, m, mollifier_normalisation()};
    p.validate();
    return p;
}

void KernelParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("epsilon must be a positive finite number, got " +
                              std::to_string(epsilon));
    }
    if (m < 1) throw InvalidArgument("m must be >= 1, got " + std::to_string(m));
    if (m > 12) throw InvalidArgument("m must be <= 12, got " + std::to_string(m));
    if (!(lambda > 0.0) || std::abs(lambda / mollifier_normalisation() - 1.0) > 1e-9) {
        throw InvalidArgument("lambda does not normalise the mollifier");
    }
}

double KernelParams::turns() const { return std::pow(10.0, m); }

Grid Grid::make(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> n) {
    Grid g{std::move(lo), std::move(hi), std::move(n)};
    g.validate();
    return g;
}

Grid Grid::line(double lo, double hi, std::size_t n) { return make({lo}, {hi}, {n}); }

Grid Grid::cube(std::size_t dim, double lo, double hi, std::size_t n) {
    return make(std::vector<double>(dim, lo), std::vector<double>(dim, hi),
                std::vector<std::size_t>(dim, n));
}

void Grid::validate() const {
    if (n.empty()) throw InvalidArgument("grid must have at least one axis");
    if (lo.size() != n.size() || hi.size() != n.size()) {
        throw InvalidArgument("grid bounds and counts disagree in dimension");
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(lo[i] < hi[i])) {
            throw InvalidArgument("grid axis " + std::to_string(i) + " needs lo < hi");
        }
        if (n[i] < 2) {
            throw InvalidArgument("grid axis " + std::to_string(i) + " needs >= 2 nodes");
        }
    }
}

double Grid::spacing(std::size_t axis) const {
    return (hi[axis] - lo[axis]) / static_cast<double>(n[axis] - 1);
}

double Grid::node(std::size_t axis, std::size_t k) const {
    const double t = static_cast<double>(k) / static_cast<double>(n[axis] - 1);
    return lo[axis] * (1.0 - t) + hi[axis] * t;
}

std::vector<double> Grid::axis_nodes(std::size_t axis) const {
    std::vector<double> xs(n[axis]);
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = node(axis, k);
    return xs;
}

std::size_t Grid::node_count() const {
    std::size_t count = 1;
    for (auto c : n) count *= c;
    return count;
}

std::vector<double> Grid::point(std::size_t flat) const {
    std::vector<double> x(dim());
    for (std::size_t axis = dim(); axis-- > 0;) {
        x[axis] = node(axis, flat % n[axis]);
        flat /= n[axis];
    }
    return x;
}

void SampledField::validate() const {
    grid.validate();
    if (values.size() != grid.node_count()) {
        throw InvalidArgument("field has " + std::to_string(values.size()) +
                              " values for " + std::to_string(grid.node_count()) + " nodes");
    }
}

SampledField sample(const Grid& grid, const std::function<double(std::span<const double>)>& f) {
    grid.validate();
    SampledField field{grid, std::vector<double>(grid.node_count())};
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const auto x = grid.point(i);
        field.values[i] = f(x);
    }
    return field;
}

ScalarField1D sample_1d(const Grid& grid, const std::function<double(double)>& f) {
    if (grid.dim() != 1) throw InvalidArgument("sample_1d needs a one-dimensional grid");
    grid.validate();
    ScalarField1D field{grid, std::vector<double>(grid.n[0])};
    for (std::size_t k = 0; k < grid.n[0]; ++k) field.values[k] = f(grid.node(0, k));
    return field;
}

std::vector<double> axis_weights(double lo, double hi, std::size_t n) {
    if (n < 2) throw InvalidArgument("quadrature axis needs >= 2 nodes");
    const double h = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> w(n);
    if (n % 2 == 1) {
        for (std::size_t k = 0; k < n; ++k) {
            const double c = (k == 0 || k + 1 == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            w[k] = c * h / 3.0;
        }
    } else {
        std::fill(w.begin(), w.end(), h);
        w.front() = w.back() = 0.5 * h;
    }
    return w;
}

namespace {

template <typename Fn>
double weighted_sum(const SampledField& field, Fn&& transform) {
    field.validate();
    const Grid& g = field.grid;
    std::vector<std::vector<double>> weights;
    weights.reserve(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) weights.push_back(axis_weights(g.lo[a], g.hi[a], g.n[a]));

    // Innermost axis is contiguous; accumulate it as a row sum.
    const std::size_t inner = g.n.back();
    const auto& w_inner = weights.back();
    const std::size_t rows = field.values.size() / inner;
    std::vector<std::size_t> idx(g.dim() - 1, 0);
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double outer_w = 1.0;
        for (std::size_t a = 0; a + 1 < g.dim(); ++a) outer_w *= weights[a][idx[a]];
        double row = 0.0;
        const double* v = field.values.data() + r * inner;
        for (std::size_t k = 0; k < inner; ++k) row += w_inner[k] * transform(v[k]);
        total += outer_w * row;
        for (std::size_t a = g.dim() - 1; a-- > 0;) {
            if (++idx[a] < g.n[a]) break;
            idx[a] = 0;
        }
    }
    return total;
}

} // namespace

double quadrature(const SampledField& field, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("quadrature exponent p must be >= 1");
    for (double v : field.values) {
        if (!std::isfinite(v)) throw InvalidArgument("integrand is not finite on every node");
    }
    if (p == 1.0) return weighted_sum(field, [](double v) { return std::abs(v); });
    const double s = weighted_sum(field, [p](double v) { return std::pow(std::abs(v), p); });
    return std::pow(s, 1.0 / p);
}

double integrate(const SampledField& field) {
    return weighted_sum(field, [](double v) { return v; });
}

double mollifier(double s, const KernelParams& params) {
    return params.lambda * bump(s);
}

double mollifier_scaled(double x, const KernelParams& params) {
    return mollifier(x / params.epsilon, params) / params.epsilon;
}

double mollifier_cdf(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t <= 0.0) return cdf_table().lower(t);
    return 1.0 - cdf_table().lower(-t);
}

double kernel_K(double x, const KernelParams& params) {
    return mollifier_scaled(x + params.epsilon, params) - mollifier_scaled(x - params.epsilon, params);
}

double angle_theta(double x, const KernelParams& params) {
    const double ax = std::abs(x);
    if (ax >= 2.0 * params.epsilon) return 0.0;
    // For x <= 0 only the J_eps(s + eps) term has accumulated mass; theta is even.
    return params.turns() * two_pi * mollifier_cdf(1.0 - ax / params.epsilon);
}

double angle_rate(double x, const KernelParams& params) {
    return params.turns() * two_pi * kernel_K(x, params);
}

} // namespace winding
