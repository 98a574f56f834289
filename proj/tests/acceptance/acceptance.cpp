// Acceptance run: one PASS/FAIL line per criterion, followed by the measured
// values. Exit status is 0 only when every criterion passes.

#include "winding/chordarc.hpp"
#include "winding/curve.hpp"
#include "winding/error.hpp"
#include "winding/harness.hpp"
#include "winding/holder.hpp"
#include "winding/hyper.hpp"
#include "winding/kernel.hpp"
#include "winding/manifold.hpp"
#include "winding/report.hpp"
#include "winding/topo.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace winding;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back((ok ? "ok   " : "FAIL ") + what);
    }
};

std::string f17(double v) { return format_double(v); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::vector<double> ladder = {0.4, 0.2, 0.1, 0.05};

Outcome kernel_normalisation() {
    Outcome o;
    for (double eps : {1.0, 0.1, 0.01}) {
        const auto p = KernelParams::make(eps, 1);
        const auto j = sample_1d(Grid::line(-eps, eps, 801), [&](double x) { return mollifier_scaled(x, p); });
        const auto k = sample_1d(Grid::line(-2 * eps, 2 * eps, 1601), [&](double x) { return kernel_K(x, p); });
        const double mass = integrate(j), l1 = quadrature(k, 1.0);
        o.require(std::abs(mass - 1.0) <= 1e-6, "eps=" + f17(eps) + " int J = " + f17(mass));
        o.require(std::abs(l1 - 2.0) <= 1e-6, "eps=" + f17(eps) + " |K|_L1 = " + f17(l1));
    }
    return o;
}

Outcome uniform_l1() {
    Outcome o;
    const double target = 4 * M_PI * 10;
    for (double eps : ladder) {
        const auto r = ld_norm_identity(SphericalGaussField::make(1, KernelParams::make(eps, 1), 400));
        o.require(rel(r.ld_norm, target) <= 1e-4, "eps=" + f17(eps) + " int|II| = " + f17(r.ld_norm) +
                                                       " (target " + f17(target) + ")");
    }
    return o;
}

Outcome ld_identity() {
    Outcome o;
    const double target = 4 * M_PI * 10;
    for (std::size_t d : {1u, 2u, 3u}) {
        const double tol = d == 3 ? 5e-3 : 1e-3;
        for (double eps : {0.2, 0.1}) {
            const auto r = ld_norm_identity(SphericalGaussField::make(d, KernelParams::make(eps, 1), d == 1 ? 400 : 100));
            o.require(rel(r.ld_norm, target) <= tol, "d=" + std::to_string(d) + " eps=" + f17(eps) + " |II|_Ld = " +
                                                         f17(r.ld_norm) + " (target " + f17(target) + ", rel err " +
                                                         f17(rel(r.ld_norm, target)) + ")");
        }
    }
    return o;
}

Outcome sup_blowup() {
    Outcome o;
    const double lam = mollifier_normalisation();
    std::vector<double> sups;
    for (double eps : ladder) {
        const double s = sup_second_form_norm(SphericalGaussField::make(1, KernelParams::make(eps, 1), 400));
        const double target = 2 * M_PI * 10 * lam / (std::exp(1.0) * eps);
        o.require(rel(s, target) <= 1e-3, "eps=" + f17(eps) + " max|II| = " + f17(s) + " (target " + f17(target) + ")");
        sups.push_back(s);
    }
    for (std::size_t i = 1; i < sups.size(); ++i) {
        const double q = sups[i] / sups[i - 1];
        o.require(q >= 1.9 && q <= 2.1, "ratio sup(eps/2)/sup(eps) = " + f17(q));
    }
    return o;
}

Outcome degree_identities() {
    Outcome o;
    for (double eps : ladder) {
        const auto p = KernelParams::make(eps, 1);
        const auto cfg = SpiralConfig::defaults(p);
        const auto xs = spiral_grid(p, cfg, 400).axis_nodes(0);
        std::vector<double> left, right;
        for (double x : xs) {
            if (x <= 0) left.push_back(angle_theta(x, p));
            if (x >= 0) right.push_back(angle_theta(x, p));
        }
        const auto l = winding_number(left), r = winding_number(right);
        o.require(l.rounded == 10 && l.residual < 0.01,
                  "eps=" + f17(eps) + " winding on (-inf,0] = " + f17(l.normalised));
        o.require(r.rounded == -10 && r.residual < 0.01,
                  "eps=" + f17(eps) + " winding on [0,inf) = " + f17(r.normalised));
    }
    for (std::size_t d : {1u, 2u}) {
        const double eps = 0.1;
        const auto f = SphericalGaussField::make(d, KernelParams::make(eps, 1), d == 1 ? 400 : 100);
        const Box box{std::vector<double>(d, -2 * eps), std::vector<double>(d, 2 * eps)};
        const auto r = degree_by_integration(f, box);
        o.require(std::abs(r.normalised) <= 1e-6, "d=" + std::to_string(d) + " full-domain degree = " + f17(r.normalised));
    }
    return o;
}

Outcome weak_star() {
    Outcome o;
    for (const auto& phi : standard_test_functions()) {
        double prev = 0.0;
        for (double eps : ladder) {
            const auto r = weak_star_pairing(KernelParams::make(eps, 1), phi);
            o.require(r.within_bound(), phi.name + " eps=" + f17(eps) + " |pairing| = " + f17(std::abs(r.pairing)) +
                                            " <= " + f17(r.bound));
            const double mag = std::abs(r.pairing);
            if (prev > 1e-12) o.require(mag / prev <= 0.55, phi.name + " halving ratio " + f17(mag / prev));
            prev = mag;
        }
        if (prev <= 1e-12) o.notes.push_back("note " + phi.name + ": pairing vanishes identically, ratio not defined");
    }
    return o;
}

Outcome verdict() {
    Outcome o;
    const auto rep = run_sweep(SweepConfig{});
    o.require(rep.verdict.has_value(), "verdict computed");
    if (rep.verdict) {
        o.require(rep.verdict->verdict == Verdict::Contradiction, "verdict " + to_string(rep.verdict->verdict));
        std::string degs;
        for (long long d : rep.verdict->per_epsilon_degree) degs += std::to_string(d) + " ";
        const bool all_ten = std::all_of(rep.verdict->per_epsilon_degree.begin(), rep.verdict->per_epsilon_degree.end(),
                                         [](long long d) { return d == 10; });
        o.require(all_ten, "per-eps degrees " + degs);
        o.require(rep.verdict->limit_degree == 0, "limit degree " + std::to_string(rep.verdict->limit_degree));
    }
    o.require(rep.exit_code() == 0, "exit code " + std::to_string(rep.exit_code()));
    return o;
}

Outcome spiral_wellformed() {
    Outcome o;
    for (double eps : ladder) {
        const auto p = KernelParams::make(eps, 1);
        const auto cfg = SpiralConfig::defaults(p);
        SampledCurve c;
        try {
            c = build_spiral(p, cfg, spiral_grid(p, cfg, 400));
        } catch (const GeometryError& e) {
            o.require(false, "eps=" + f17(eps) + " " + e.what());
            continue;
        }
        o.require(!find_self_intersection(c.points), "eps=" + f17(eps) + " simple");
        o.require(radius_monotone(c), "eps=" + f17(eps) + " monotone radius on each half");
        double normal_dev = 0.0, kappa = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (std::abs(c.xs[i]) >= 2 * eps) {
                normal_dev = std::max(normal_dev, (c.normals[i] - Eigen::Vector2d(1, 0)).norm());
                kappa = std::max(kappa, c.curvature[i]);
            }
        }
        o.require(normal_dev <= 1e-12 && kappa == 0.0,
                  "eps=" + f17(eps) + " flat tails (normal deviation " + f17(normal_dev) + ")");
    }
    return o;
}

Outcome jacobian() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    const double h = 1e-5;
    for (std::size_t d : {2u, 3u}) {
        const double eps = 0.2;
        const auto f = SphericalGaussField::make(d, KernelParams::make(eps, 1), 20);
        std::uniform_real_distribution<double> u(-2 * eps, 2 * eps);
        double worst = 0.0, worst_second = 0.0;
        for (int t = 0; t < 100; ++t) {
            std::vector<double> x(d);
            for (auto& v : x) v = u(rng);
            const Eigen::MatrixXd jac = jacobian_rows(x, f);
            for (std::size_t i = 0; i < d; ++i) {
                const auto at = [&](double off) {
                    auto y = x;
                    y[i] += off;
                    return gauss_map_nd(y, f);
                };
                const Eigen::VectorXd p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
                const Eigen::VectorXd second = (p1 - m1) / (2 * h);
                const Eigen::VectorXd fourth = (8.0 * (p1 - m1) - (p2 - m2)) / (12 * h);
                const Eigen::VectorXd row = jac.row(static_cast<Eigen::Index>(i)).transpose();
                worst = std::max(worst, (row - fourth).cwiseAbs().maxCoeff());
                worst_second = std::max(worst_second, (row - second).cwiseAbs().maxCoeff());
            }
        }
        o.require(worst < 1e-6, "d=" + std::to_string(d) + " max |J - FD| = " + f17(worst) +
                                    " (fourth-order central stencil, h = 1e-5)");
        o.notes.push_back("note d=" + std::to_string(d) + ": second-order stencil deviates by " + f17(worst_second) +
                          ", its h^2/6 truncation term");
    }
    return o;
}

double cap_mean_norm(double r) { return 0.5 * (1.0 + std::cos(r)); }

double cap_bmo(double r) {
    const double c = cap_mean_norm(r);
    const auto f = [c](double phi) { return std::sqrt(1.0 - 2.0 * c * std::cos(phi) + c * c) * std::sin(phi); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, r, 15, 1e-13) / (1.0 - std::cos(r));
}

Outcome chordarc() {
    Outcome o;
    const auto flat = diagnose(make_flat_patch(41, 1.0));
    o.require(flat.bmo < 0.02 && flat.gamma < 0.02 && flat.eta < 0.02,
              "flat patch bmo " + f17(flat.bmo) + ", gamma " + f17(flat.gamma) + ", eta " + f17(flat.eta));
    const auto circ = diagnose(make_circle(1000));
    o.require(rel(circ.eta2, M_PI / 2 - 1) <= 0.02, "unit circle eta2 = " + f17(circ.eta2) + " (oracle " +
                                                          f17(M_PI / 2 - 1) + ")");
    const auto sphere = make_icosphere(4);
    const auto r = diagnose(sphere);
    double bmo = 0.0, g2 = 0.0, e1 = 0.0;
    for (double rad : r.radii_tested) {
        const double cap = std::min(rad, M_PI);
        bmo = std::max(bmo, cap_bmo(cap));
        g2 = std::max(g2, (1.0 - std::cos(cap)) * cap_mean_norm(cap) / cap);
        e1 = std::max(e1, rad <= 2.0 ? 0.0 : 1.0 - 4.0 / (rad * rad));
    }
    const double gamma = std::max(bmo, g2), eta = std::max(e1, M_PI / 2 - 1);
    o.require(rel(r.bmo, bmo) <= 0.05, "sphere (" + std::to_string(sphere.size()) + " vertices) bmo " + f17(r.bmo) +
                                           " vs oracle " + f17(bmo));
    o.require(rel(r.gamma, gamma) <= 0.05, "sphere gamma " + f17(r.gamma) + " vs oracle " + f17(gamma));
    o.require(rel(r.eta, eta) <= 0.05, "sphere eta " + f17(r.eta) + " vs oracle " + f17(eta));
    return o;
}

Outcome holder() {
    Outcome o;
    const auto fit = [](const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
        std::vector<double> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = lo + (hi - lo) * double(i) / double(n - 1);
            v[i] = f(u[i]);
        }
        return holder_exponent(graph_from_samples(u, v)).gamma_hat;
    };
    for (double g : {0.3, 0.5, 0.8}) {
        const double est = fit([g](double u) { return std::pow(std::abs(u), g); }, -1.0, 1.0, 10000);
        o.require(std::abs(est - g) <= 0.1, "|u|^" + f17(g) + " gamma_hat = " + f17(est));
    }
    const double est = fit(
        [](double u) {
            double s = 0.0;
            for (int k = 0; k < 30; ++k) s += std::pow(2.0, -0.7 * k) * std::cos(std::pow(2.0, k) * M_PI * u);
            return s;
        },
        0.0, 1.0, 10000);
    o.require(std::abs(est - 0.7) <= 0.1, "lacunary series gamma=0.7: gamma_hat = " + f17(est));
    return o;
}

Outcome constants() {
    Outcome o;
    const auto z = semmes_constants(0.0, 1.0, 2, 1.0, 1.0);
    o.require(z.gamma == 1.0 && z.c1 == 1.0, "delta0=0 gives gamma " + f17(z.gamma) + ", C1 " + f17(z.c1));
    const double c2 = 2.0;
    const int d = 1;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double delta = 0.004 * k;
        worst = std::max(worst, std::abs(semmes_constants(delta, 1.0, d, c2, 3.0).gamma - (1.0 - c2 * d * delta)));
    }
    o.require(worst <= 1e-15, "gamma = 1 - C2 d delta0 across sweep (max deviation " + f17(worst) + ")");
    bool rejected = false;
    try {
        semmes_constants(1.0 / (c2 * d), 1.0, d, c2, 3.0);
    } catch (const InvalidArgument&) {
        rejected = true;
    }
    o.require(rejected, "delta0 = 1/(C2 d) rejected");
    return o;
}

Outcome determinism() {
    Outcome o;
    SweepConfig cfg;
    cfg.diagnostics.chordarc = true;
    cfg.chordarc_max_centres = 32;
    const std::string a = dump_json(to_json(run_sweep(cfg)));
    const std::string b = dump_json(to_json(run_sweep(cfg)));
    o.require(a == b, "two sweep reports byte-identical (" + std::to_string(a.size()) + " bytes, hash " +
                          hex64(fnv1a64(a)) + ")");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 means none
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "kernel normalisation", 1.0, kernel_normalisation},
        {2, "uniform L1 curvature (d=1)", 1.0, uniform_l1},
        {3, "exact L^d identity (d=1,2,3)", 60.0, ld_identity},
        {4, "sup-norm blow-up", 0.0, sup_blowup},
        {5, "degree identities", 0.0, degree_identities},
        {6, "weak-* degeneration", 0.0, weak_star},
        {7, "non-convergence verdict", 30.0, verdict},
        {8, "spiral well-formedness", 0.0, spiral_wellformed},
        {9, "Jacobian cross-check", 0.0, jacobian},
        {10, "chord-arc calibration", 0.0, chordarc},
        {11, "Holder estimator calibration", 0.0, holder},
        {12, "constants formulas", 0.0, constants},
        {13, "determinism", 0.0, determinism},
    };
    int failures = 0;
    std::ostringstream details;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0.0) {
            o.require(secs < c.time_limit, "runtime " + f17(secs) + " s < " + f17(c.time_limit) + " s");
        }
        if (!o.pass) ++failures;
        std::printf("%s %2d %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
        details << "[" << c.id << "] " << c.name << "\n";
        for (const auto& n : o.notes) details << "    " << n << "\n";
    }
    std::printf("\n%s", details.str().c_str());
    std::printf("\n%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
