#include "winding/curve.hpp"
#include "winding/error.hpp"
#include "winding/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace winding;

namespace {

SampledCurve standard_spiral(double eps, int m = 1, std::size_t density = 400) {
    const auto p = KernelParams::make(eps, m);
    const auto cfg = SpiralConfig::defaults(p);
    return build_spiral(p, cfg, spiral_grid(p, cfg, density));
}

} // namespace

TEST(Curve, GaussMapIsUnitAndFlatOutsideSupport) {
    const auto p = KernelParams::make(0.1, 1);
    for (double x : {-0.3, -0.1, 0.0, 0.05, 0.21}) EXPECT_NEAR(gauss_map_1d(x, p).norm(), 1.0, 1e-14);
    EXPECT_EQ(gauss_map_1d(0.25, p), Eigen::Vector2d(1.0, 0.0));
    EXPECT_NEAR(curvature_1d(0.07, p), std::abs(turning_rate_1d(0.07, p)), 1e-12);
}

TEST(Curve, SpiralWellFormedAcrossLadder) {
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const auto c = standard_spiral(eps);
        EXPECT_FALSE(find_self_intersection(c.points).has_value()) << eps;
        EXPECT_TRUE(radius_monotone(c)) << eps;
        // Tails: constant normal (1, 0), zero curvature, collinear samples.
        std::vector<std::size_t> left, right;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c.xs[i] <= -2 * eps) left.push_back(i);
            if (c.xs[i] >= 2 * eps) right.push_back(i);
        }
        ASSERT_GT(left.size(), 10u);
        ASSERT_GT(right.size(), 10u);
        for (const auto* side : {&left, &right}) {
            const auto& a = c.points[side->front()];
            const Eigen::Vector2d dir = (c.points[side->back()] - a).normalized();
            for (std::size_t i : *side) {
                EXPECT_NEAR((c.normals[i] - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-12);
                EXPECT_EQ(c.curvature[i], 0.0);
                const Eigen::Vector2d r = c.points[i] - a;
                EXPECT_NEAR(r.x() * dir.y() - r.y() * dir.x(), 0.0, 1e-12);
            }
        }
    }
}

TEST(Curve, TailsStartOnTheUnitCircleAndInsideIt) {
    const auto p = KernelParams::make(0.1, 1);
    const auto cfg = SpiralConfig::defaults(p);
    EXPECT_NEAR((spiral_point(-0.2, p, cfg) - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-12);
    EXPECT_NEAR((spiral_point(0.2, p, cfg) - Eigen::Vector2d(1 - cfg.out_offset, 0)).norm(), 0.0, 1e-12);
}

TEST(Curve, ConfigValidation) {
    const auto p = KernelParams::make(0.1, 1);
    auto cfg = SpiralConfig::defaults(p);
    cfg.radial_step = 0.2;  // 10 turns would pass through the origin
    EXPECT_THROW(cfg.validate(p), InvalidArgument);
    cfg = SpiralConfig::defaults(p);
    cfg.out_offset = cfg.radial_step * 2;
    EXPECT_THROW(cfg.validate(p), InvalidArgument);
    cfg = SpiralConfig::defaults(p);
    cfg.neck_width = 0.2;
    EXPECT_THROW(cfg.validate(p), InvalidArgument);
    EXPECT_THROW(spiral_grid(p, SpiralConfig::defaults(p), 1), InvalidArgument);
}

TEST(Curve, SelfIntersectionDetector) {
    const std::vector<Eigen::Vector2d> bow = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    EXPECT_TRUE(find_self_intersection(bow).has_value());
    const std::vector<Eigen::Vector2d> zig = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    EXPECT_FALSE(find_self_intersection(zig).has_value());
    // Touching an earlier segment counts.
    const std::vector<Eigen::Vector2d> touch = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 0}};
    EXPECT_TRUE(find_self_intersection(touch).has_value());
}

TEST(Curve, LocalisedLengthMatchesDenseArclength) {
    const double eps = 0.1;
    const auto p = KernelParams::make(eps, 1);
    const auto cfg = SpiralConfig::defaults(p);
    const auto c = standard_spiral(eps, 1, 2000);
    const auto core = localize(c, -2 * eps, 2 * eps);
    // Dense oracle: chord sum of spiral_point on a much finer parameter grid.
    const std::size_t n = 2'000'000;
    double oracle = 0.0;
    Eigen::Vector2d prev = spiral_point(-2 * eps, p, cfg);
    for (std::size_t k = 1; k <= n; ++k) {
        const Eigen::Vector2d q = spiral_point(-2 * eps + 4 * eps * double(k) / double(n), p, cfg);
        oracle += (q - prev).norm();
        prev = q;
    }
    const double length = curve_measures(core).length;
    EXPECT_NEAR(length / oracle, 1.0, 1e-2);
    // Two arms of ten turns each at radii between 1 - 10 rs and 1.
    const double mean_radius = 1.0 - 0.5 * 10 * cfg.radial_step - 0.5 * cfg.out_offset;
    EXPECT_NEAR(length / (2 * 10 * 2 * M_PI * mean_radius), 1.0, 0.05);
}

TEST(Curve, LocaliseKeepsCurvatureMass) {
    const auto c = standard_spiral(0.2);
    const auto core = localize(c, -0.4, 0.4);
    EXPECT_LT(core.size(), c.size());
    EXPECT_NEAR(curve_measures(core).l1_curvature, curve_measures(c).l1_curvature, 1e-8);
    const auto same = localize(c, c.xs.front(), c.xs.back());
    EXPECT_EQ(same.size(), c.size());
    EXPECT_THROW(localize(c, -100.0, 0.0), InvalidArgument);
    EXPECT_THROW(localize(c, 0.0, 1e-9), InvalidArgument);
}

TEST(Curve, CsvRoundTripIsExact) {
    const auto c = standard_spiral(0.1, 1, 200);
    std::stringstream ss;
    write_curve_csv(ss, c);
    const auto back = read_curve_csv(ss);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back.xs[i], c.xs[i]);
        EXPECT_LE((back.points[i] - c.points[i]).norm(), 1e-12);
        EXPECT_LE((back.normals[i] - c.normals[i]).norm(), 1e-12);
        EXPECT_EQ(back.curvature[i], c.curvature[i]);
    }
}

TEST(Curve, CsvParseErrorsCarryLineNumbers) {
    std::stringstream bad("x,px,py,nx,ny,kappa,w\n0,0,0,1,0,0,0\n1,1,zz,1,0,0,0\n");
    try {
        read_curve_csv(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::stringstream header("a,b\n");
    EXPECT_THROW(read_curve_csv(header), ParseError);
}

TEST(Curve, MultiBlowupAngle) {
    const auto p = KernelParams::make(0.01, 1);
    const std::vector<BlowupCentre> centres = {{0.0, 0.05}, {0.2, 0.05}, {0.4, 0.05}};
    EXPECT_NEAR(multi_blowup_angle(0.0, centres, p), 0.5 * angle_theta(0.0, p), 1e-12);
    EXPECT_NEAR(multi_blowup_angle(0.205, centres, p), 0.25 * angle_theta(0.005, p), 1e-12);
    EXPECT_EQ(multi_blowup_angle(0.1, centres, p), 0.0);
    EXPECT_THROW(multi_blowup_angle(0.0, {{0.0, 0.01}}, p), InvalidArgument);
    EXPECT_THROW(multi_blowup_angle(0.0, {{0.0, 0.05}, {0.05, 0.05}}, p), InvalidArgument);
}

TEST(Curve, PolylineWeightsSumToLength) {
    const std::vector<Eigen::Vector2d> pts = {{0, 0}, {3, 0}, {3, 4}};
    const auto w = polyline_weights(pts);
    EXPECT_DOUBLE_EQ(w[0], 1.5);
    EXPECT_DOUBLE_EQ(w[1], 3.5);
    EXPECT_DOUBLE_EQ(w[2], 2.0);
}
