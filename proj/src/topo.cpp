#include "winding/topo.hpp"

#include "winding/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace winding {

bool DegreeReport::certified() const { return residual < 0.01; }

nlohmann::json to_json(const DegreeReport& r) {
    return {{"region", r.region},     {"method", r.method},     {"raw_integral", r.raw_integral},
            {"normalised", r.normalised}, {"rounded", r.rounded}, {"residual", r.residual},
            {"certified", r.certified()}};
}

DegreeReport make_degree_report(std::string region, std::string method, double raw, double normalised) {
    DegreeReport r;
    r.region = std::move(region);
    r.method = std::move(method);
    r.raw_integral = raw;
    r.normalised = normalised;
    r.rounded = std::llround(normalised);
    r.residual = std::abs(normalised - static_cast<double>(r.rounded));
    return r;
}

DegreeReport winding_number(const std::vector<double>& thetas) {
    if (thetas.empty()) throw InvalidArgument("angle path is empty");
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        if (!std::isfinite(thetas[i])) throw InvalidArgument("angle path has a non-finite sample");
        if (std::abs(thetas[i] - thetas[i - 1]) >= std::numbers::pi) {
            throw AliasingError("angle jumps by >= pi between samples " + std::to_string(i - 1) +
                                " and " + std::to_string(i) + "; sample more finely");
        }
    }
    const double raw = thetas.back() - thetas.front();
    return make_degree_report("path", "unwrapped angle", raw, raw / two_pi);
}

DegreeReport winding_of_normals(const std::vector<Eigen::Vector2d>& normals) {
    if (normals.empty()) throw InvalidArgument("normal path is empty");
    double total = 0.0;
    for (std::size_t i = 1; i < normals.size(); ++i) {
        const auto& a = normals[i - 1];
        const auto& b = normals[i];
        const double step = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
        if (std::abs(step) >= 0.99 * std::numbers::pi) {
            throw AliasingError("normal turns by ~pi between samples " + std::to_string(i - 1) +
                                " and " + std::to_string(i) + "; sample more finely");
        }
        total += step;
    }
    return make_degree_report("path", "principal increments", total, total / two_pi);
}

namespace {

// One-variable factor of the closed-form degree density on axis a.
double axis_factor(double x, std::size_t a, const SphericalGaussField& field) {
    const double rate = angle_rate(x, field.params);
    if (rate == 0.0) return 0.0;
    const double s = std::sin(angle_theta(x, field.params));
    double v = rate;
    for (std::size_t p = 0; p + a + 1 < field.dim; ++p) v *= s;
    return v;
}

double axis_integral(double lo, double hi, std::size_t n, std::size_t a,
                     const SphericalGaussField& field, std::size_t stride) {
    const std::size_t m = (n - 1) / stride + 1;
    const auto w = axis_weights(lo, hi, m);
    const Grid g = Grid::line(lo, hi, n);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += w[k] * axis_factor(g.node(0, k * stride), a, field);
    return sum;
}

std::string describe(const Box& b) {
    std::string s = "box";
    for (std::size_t a = 0; a < b.lo.size(); ++a) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s[%.6g,%.6g]", a == 0 ? " " : "x", b.lo[a], b.hi[a]);
        s += buf;
    }
    return s;
}

} // namespace

DegreeReport degree_by_integration(const SphericalGaussField& field, const Box& region) {
    field.validate();
    const std::size_t d = field.dim;
    if (region.lo.size() != d || region.hi.size() != d) {
        throw InvalidArgument("region dimension does not match the field");
    }
    const double h = field.grid.spacing(0);
    if (h > field.params.epsilon / 100.0 * (1.0 + 1e-9)) {
        throw InvalidArgument("field spacing exceeds eps/100 (under-resolved)");
    }
    // Density is a product of axis factors, so the tensor rule factorises.
    double fine = 1.0;
    double coarse = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
        if (!(region.lo[a] < region.hi[a])) throw InvalidArgument("region needs lo < hi on every axis");
        auto cells = static_cast<std::size_t>(std::ceil((region.hi[a] - region.lo[a]) / h - 1e-9));
        cells = std::max<std::size_t>((cells + 3) / 4 * 4, 4);  // both rules stay Simpson
        const std::size_t n = cells + 1;
        fine *= axis_integral(region.lo[a], region.hi[a], n, a, field, 1);
        coarse *= axis_integral(region.lo[a], region.hi[a], n, a, field, 2);
    }
    const double vol = sphere_volume(d);
    if (std::abs(fine - coarse) / vol > 1e-3) {
        throw ResolutionError("degree integral changes by " + std::to_string(std::abs(fine - coarse) / vol) +
                              " between resolutions (limit 1e-3)");
    }
    return make_degree_report(describe(region), "pullback quadrature", fine, fine / vol);
}

std::vector<TestFunction> standard_test_functions() {
    return {
        {"one", [](double) { return 1.0; }, [](double) { return 0.0; }},
        {"identity", [](double s) { return s; }, [](double) { return 1.0; }},
        {"sine", [](double s) { return std::sin(s); }, [](double s) { return std::cos(s); }},
        // exp(1 - 1/(1 - (s-0.3)^2)), shifted off the origin so it pairs nontrivially.
        {"bump",
         [](double s) {
             const double u = s - 0.3;
             return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
         },
         [](double s) {
             const double u = s - 0.3;
             if (std::abs(u) >= 1.0) return 0.0;
             const double q = 1.0 - u * u;
             return std::exp(1.0 - 1.0 / q) * (-2.0 * u / (q * q));
         }},
    };
}

bool WeakStarReport::within_bound() const { return std::abs(pairing) <= bound * (1.0 + 1e-6) + 1e-12; }

nlohmann::json to_json(const WeakStarReport& r) {
    return {{"epsilon", r.epsilon},
            {"test_function", r.test_function},
            {"pairing", r.pairing},
            {"bound", r.bound},
            {"within_bound", r.within_bound()}};
}

WeakStarReport weak_star_pairing(const KernelParams& params, const TestFunction& phi,
                                 std::size_t density) {
    params.validate();
    if (density < 2) throw InvalidArgument("weak-* density must be >= 2");
    const double half = 2.0 * params.epsilon;
    const Grid g = Grid::line(-half, half, 4 * density + 1);
    double sup_dphi = 0.0;
    const auto field = sample_1d(g, [&](double x) {
        sup_dphi = std::max(sup_dphi, std::abs(phi.df(x)));
        return kernel_K(x, params) * phi.f(x);
    });
    WeakStarReport r;
    r.epsilon = params.epsilon;
    r.test_function = phi.name;
    r.pairing = integrate(field);
    r.bound = 2.0 * params.epsilon * sup_dphi;
    return r;
}

DegreeReport pointwise_limit_degree(const std::vector<double>& xs, int m) {
    if (xs.empty()) throw InvalidArgument("limit path needs at least one sample");
    double min_abs = std::abs(xs.front());
    for (double x : xs) {
        if (x == 0.0) throw InvalidArgument("the pointwise limit is not defined at x = 0");
        if ((x > 0.0) != (xs.front() > 0.0)) throw InvalidArgument("limit samples must lie on one side of 0");
        min_abs = std::min(min_abs, std::abs(x));
    }
    const KernelParams p = KernelParams::make(min_abs / 4.0, m);
    std::vector<double> thetas(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) thetas[i] = angle_theta(xs[i], p);
    DegreeReport r = winding_number(thetas);
    r.region = xs.front() < 0.0 ? "(-inf,0)" : "(0,inf)";
    r.method = "pointwise limit";
    return r;
}

std::string to_string(Verdict v) {
    return v == Verdict::Contradiction ? "CONTRADICTION" : "INCONCLUSIVE";
}

nlohmann::json to_json(const VerdictRecord& r) {
    return {{"family_id", r.family_id},
            {"m", r.m},
            {"epsilons", r.epsilons},
            {"per_epsilon_degree", r.per_epsilon_degree},
            {"limit_degree", r.limit_degree},
            {"verdict", to_string(r.verdict)},
            {"diagnostics", r.diagnostics}};
}

VerdictRecord nonconvergence_verdict(const std::string& family_id, int m,
                                     const std::vector<VerdictEntry>& sweep) {
    if (sweep.size() < 4) {
        throw InvalidArgument("verdict needs >= 4 epsilons, got " + std::to_string(sweep.size()));
    }
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        if (!(sweep[i].epsilon < sweep[i - 1].epsilon) || !(sweep[i].epsilon > 0.0)) {
            throw InvalidArgument("verdict epsilons must be positive and strictly decreasing");
        }
        const double ratio = sweep[i].epsilon / sweep[i - 1].epsilon;
        const double first = sweep[1].epsilon / sweep[0].epsilon;
        if (std::abs(ratio / first - 1.0) > 1e-6) {
            throw InvalidArgument("verdict epsilons must decrease geometrically");
        }
    }
    VerdictRecord r;
    r.family_id = family_id;
    r.m = m;
    bool all_certified = true;
    for (const auto& e : sweep) {
        r.epsilons.push_back(e.epsilon);
        r.per_epsilon_degree.push_back(e.degree.rounded);
        if (!e.degree.certified()) {
            all_certified = false;
            r.diagnostics.push_back("degree at eps=" + std::to_string(e.epsilon) + " not certified (residual " +
                                    std::to_string(e.degree.residual) + ")");
        }
        if (!e.limit.certified()) {
            all_certified = false;
            r.diagnostics.push_back("limit degree at eps=" + std::to_string(e.epsilon) + " not certified");
        }
    }
    r.limit_degree = sweep.front().limit.rounded;
    const long long d0 = sweep.front().degree.rounded;
    const bool constant = std::all_of(sweep.begin(), sweep.end(),
                                      [&](const VerdictEntry& e) { return e.degree.rounded == d0; });
    const bool same_limit = std::all_of(sweep.begin(), sweep.end(), [&](const VerdictEntry& e) {
        return e.limit.rounded == r.limit_degree;
    });
    if (!constant) r.diagnostics.push_back("per-epsilon degree is not constant");
    if (!same_limit) r.diagnostics.push_back("limit degree differs between entries");
    if (constant && same_limit && d0 == r.limit_degree) {
        r.diagnostics.push_back("family degree equals the limit degree");
    }
    r.verdict = (all_certified && constant && same_limit && d0 != r.limit_degree) ? Verdict::Contradiction
                                                                                  : Verdict::Inconclusive;
    return r;
}

} // namespace winding
