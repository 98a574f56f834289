#include "winding/chordarc.hpp"
#include "winding/error.hpp"
#include "winding/holder.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace winding;

namespace {

GraphFit sampled(std::size_t n, double lo, double hi, const std::function<double(double)>& f) {
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = lo + (hi - lo) * double(i) / double(n - 1);
        v[i] = f(u[i]);
    }
    return graph_from_samples(u, v);
}

// Lacunary cosine series; Holder exponent gamma for 0 < gamma < 1.
double lacunary(double u, double gamma) {
    double s = 0.0;
    for (int k = 0; k < 30; ++k) s += std::pow(2.0, -gamma * k) * std::cos(std::pow(2.0, k) * M_PI * u);
    return s;
}

} // namespace

TEST(Holder, PowerCusps) {
    for (double g : {0.3, 0.5, 0.8}) {
        const auto est = holder_exponent(sampled(10001, -1.0, 1.0, [g](double u) { return std::pow(std::abs(u), g); }));
        EXPECT_NEAR(est.gamma_hat, g, 0.1) << g;
        EXPECT_FALSE(est.clipped);
    }
}

TEST(Holder, LacunarySeries) {
    const auto est = holder_exponent(sampled(10000, 0.0, 1.0, [](double u) { return lacunary(u, 0.7); }));
    EXPECT_NEAR(est.gamma_hat, 0.7, 0.1);
}

TEST(Holder, AffineGraphIsLipschitz) {
    const auto est = holder_exponent(sampled(2001, -1.0, 1.0, [](double u) { return 2.0 * u + 1.0; }));
    EXPECT_NEAR(est.gamma_hat, 1.0, 1e-6);
    EXPECT_GT(est.r2, 0.999);
}

TEST(Holder, SmoothGraphClipsToOne) {
    const auto est = holder_exponent(sampled(2001, -1.0, 1.0, [](double u) { return u * u * u + u * u; }));
    EXPECT_LE(est.gamma_hat, 1.0);
    EXPECT_GT(est.gamma_hat, 0.9);
}

TEST(Holder, OscillationsAreMonotone) {
    const auto est = holder_exponent(sampled(4001, 0.0, 1.0, [](double u) { return lacunary(u, 0.5); }));
    for (std::size_t i = 1; i < est.oscillations.size(); ++i) EXPECT_GE(est.oscillations[i], est.oscillations[i - 1]);
    for (std::size_t i = 1; i < est.scales.size(); ++i) EXPECT_GT(est.scales[i], est.scales[i - 1]);
}

TEST(Holder, FlatGraphAndTooFewSamples) {
    const auto flat = holder_exponent(sampled(101, 0.0, 1.0, [](double) { return 3.0; }));
    EXPECT_TRUE(flat.flat);
    EXPECT_EQ(flat.gamma_hat, 1.0);
    EXPECT_THROW(graph_from_samples({0, 1, 2}, {0, 1, 2}), InvalidArgument);
}

TEST(Holder, FlatPatchSystemPasses) {
    const auto m = make_flat_patch(41, 1.0);
    const auto rep = graph_system_check(m, build_net(m, 0.3));
    EXPECT_EQ(rep.pass_fraction, 1.0);
    EXPECT_EQ(rep.min_gamma, 1.0);
}

TEST(Holder, SphereBallIsSmoothGraph) {
    const auto m = make_icosphere(6);
    ASSERT_EQ(m.size(), 40962u);
    const auto fit = local_graph_fit(m, 0, 0.3);
    EXPECT_TRUE(fit.graph_ok);
    EXPECT_NEAR(fit.mean_normal_norm, 0.5 * (1.0 + std::cos(0.3)), 0.01);
    const auto est = holder_exponent(fit);
    EXPECT_GT(est.gamma_hat, 0.9);
}

TEST(Holder, FoldedArcIsNotAGraph) {
    const auto c = make_circle(400);
    const auto fit = local_graph_fit(c, 0, 2.0);
    EXPECT_FALSE(fit.graph_ok);
    EXPECT_THROW(holder_exponent(fit), InvalidArgument);
}

TEST(Holder, FitPreconditions) {
    const auto s = make_icosphere(3);
    EXPECT_THROW(local_graph_fit(s, 0, 1e-4), InvalidArgument);
    EXPECT_THROW(local_graph_fit(s, 0, 3.2), GeometryError);
}
