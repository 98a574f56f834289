#include "winding/error.hpp"
#include "winding/hyper.hpp"
#include "winding/topo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace winding;

namespace {

std::vector<double> theta_path(const KernelParams& p, double lo, double hi, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = angle_theta(lo + (hi - lo) * double(k) / double(n - 1), p);
    return t;
}

DegreeReport certified(long long d) { return make_degree_report("r", "test", 2 * M_PI * d, double(d)); }

} // namespace

TEST(Topo, WindingOfHalfLines) {
    const auto p = KernelParams::make(0.1, 1);
    const auto left = winding_number(theta_path(p, -0.5, 0.0, 4001));
    const auto right = winding_number(theta_path(p, 0.0, 0.5, 4001));
    EXPECT_EQ(left.rounded, 10);
    EXPECT_EQ(right.rounded, -10);
    EXPECT_LT(left.residual, 0.01);
    EXPECT_TRUE(right.certified());
    EXPECT_NEAR(winding_number(theta_path(p, -0.5, 0.5, 8001)).normalised, 0.0, 1e-6);
}

TEST(Topo, AliasingIsDetected) {
    EXPECT_THROW(winding_number({0.0, 1.0, 1.0 + M_PI}), AliasingError);
    const auto p = KernelParams::make(0.1, 2);
    EXPECT_THROW(winding_number(theta_path(p, -0.2, 0.0, 50)), AliasingError);
}

TEST(Topo, WindingOfCircleNormals) {
    std::vector<Eigen::Vector2d> n;
    for (int k = 0; k <= 360; ++k) n.emplace_back(std::cos(3 * k * M_PI / 180), std::sin(3 * k * M_PI / 180));
    EXPECT_EQ(winding_of_normals(n).rounded, 3);
    std::vector<Eigen::Vector2d> flip = {{1, 0}, {-1, 0}};
    EXPECT_THROW(winding_of_normals(flip), AliasingError);
}

TEST(Topo, DegreeByIntegrationD1AndD2) {
    const auto p = KernelParams::make(0.1, 1);
    const auto f1 = SphericalGaussField::make(1, p, 200);
    EXPECT_EQ(degree_by_integration(f1, {{-0.2}, {0.0}}).rounded, 10);
    EXPECT_EQ(degree_by_integration(f1, {{0.0}, {0.2}}).rounded, -10);
    EXPECT_NEAR(degree_by_integration(f1, {{-0.2}, {0.2}}).normalised, 0.0, 1e-6);
    const auto f2 = SphericalGaussField::make(2, p, 100);
    EXPECT_NEAR(degree_by_integration(f2, {{-0.2, -0.2}, {0.2, 0.2}}).normalised, 0.0, 1e-6);
}

TEST(Topo, DegreeByIntegrationRejectsBadBoxes) {
    const auto f = SphericalGaussField::make(2, KernelParams::make(0.1, 1), 50);
    EXPECT_THROW(degree_by_integration(f, {{0.0}, {0.1}}), InvalidArgument);
    EXPECT_THROW(degree_by_integration(f, {{0.1, 0.0}, {0.0, 0.1}}), InvalidArgument);
}

TEST(Topo, WeakStarBoundAndDecay) {
    const auto fns = standard_test_functions();
    ASSERT_EQ(fns.size(), 4u);
    for (const auto& phi : fns) {
        double prev = -1.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            const auto r = weak_star_pairing(KernelParams::make(eps, 1), phi);
            EXPECT_TRUE(r.within_bound()) << phi.name << " eps " << eps;
            const double mag = std::abs(r.pairing);
            if (prev > 1e-12) EXPECT_LE(mag / prev, 0.55) << phi.name << " eps " << eps;
            prev = mag;
        }
    }
}

TEST(Topo, WeakStarPairingOfIdentityIsMinusTwoEps) {
    // int K_eps(s) s ds = -2 eps: K is the difference of two unit masses centred at -eps and +eps.
    const auto fns = standard_test_functions();
    const auto it = std::find_if(fns.begin(), fns.end(), [](const TestFunction& t) { return t.name == "identity"; });
    ASSERT_NE(it, fns.end());
    for (double eps : {0.3, 0.07}) {
        EXPECT_NEAR(weak_star_pairing(KernelParams::make(eps, 1), *it).pairing, -2 * eps, 1e-9);
    }
}

TEST(Topo, PointwiseLimitHasZeroDegree) {
    std::vector<double> xs;
    for (int k = 1; k <= 100; ++k) xs.push_back(-0.01 * k);
    const auto r = pointwise_limit_degree(xs, 1);
    EXPECT_EQ(r.rounded, 0);
    EXPECT_TRUE(r.certified());
}

TEST(Topo, VerdictLogic) {
    std::vector<VerdictEntry> s;
    for (double e : {0.4, 0.2, 0.1, 0.05}) s.push_back({e, certified(10), certified(0)});
    EXPECT_EQ(nonconvergence_verdict("spiral", 1, s).verdict, Verdict::Contradiction);
    auto same = s;
    for (auto& e : same) e.limit = certified(10);
    EXPECT_EQ(nonconvergence_verdict("spiral", 1, same).verdict, Verdict::Inconclusive);
    auto drift = s;
    drift[2].degree = certified(9);
    EXPECT_EQ(nonconvergence_verdict("spiral", 1, drift).verdict, Verdict::Inconclusive);
    auto fuzzy = s;
    fuzzy[1].degree = make_degree_report("r", "t", 0.0, 10.2);
    EXPECT_EQ(nonconvergence_verdict("spiral", 1, fuzzy).verdict, Verdict::Inconclusive);
    EXPECT_THROW(nonconvergence_verdict("spiral", 1, {s[0], s[1], s[2]}), InvalidArgument);
    auto uneven = s;
    uneven[3].epsilon = 0.07;
    EXPECT_THROW(nonconvergence_verdict("spiral", 1, uneven), InvalidArgument);
    EXPECT_EQ(to_string(Verdict::Contradiction), "CONTRADICTION");
}
