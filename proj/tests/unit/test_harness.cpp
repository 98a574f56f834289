#include "winding/error.hpp"
#include "winding/harness.hpp"
#include "winding/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace winding;

namespace {

std::vector<Eigen::Vector2d> circle(double r, std::size_t n) {
    std::vector<Eigen::Vector2d> pts;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2 * M_PI * double(k) / double(n);
        pts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
    return pts;
}

SweepConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

} // namespace

TEST(Harness, HausdorffBasics) {
    const auto a = circle(1.0, 2000);
    EXPECT_EQ(hausdorff_distance(a, a), 0.0);
    EXPECT_NEAR(hausdorff_distance(a, circle(0.9, 2000)), 0.1, 1e-3);
    auto b = a;
    b.emplace_back(6.0, 0.0);
    EXPECT_NEAR(hausdorff_distance(a, b), 5.0, 1e-12);
    EXPECT_THROW(hausdorff_distance(a, std::vector<Eigen::Vector2d>{}), InvalidArgument);
}

TEST(Harness, HausdorffMatchesBruteForce) {
    std::vector<Eigen::Vector3d> a, b;
    for (int i = 0; i < 300; ++i) {
        a.emplace_back(std::sin(1.3 * i), std::cos(0.7 * i) * 3, 0.1 * i);
        b.emplace_back(std::cos(2.1 * i) * 2, std::sin(0.3 * i), 5 * std::sin(0.05 * i));
    }
    const auto directed = [](const auto& p, const auto& q) {
        double worst = 0.0;
        for (const auto& x : p) {
            double best = 1e300;
            for (const auto& y : q) best = std::min(best, (x - y).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    EXPECT_NEAR(hausdorff_distance(a, b), std::max(directed(a, b), directed(b, a)), 1e-12);
}

TEST(Harness, ConfigParsing) {
    const auto cfg = parse("# ladder\nd = 1\nm = 1\nepsilons = 0.4, 0.2, 0.1, 0.05\ngrid_density = 300\n"
                           "spiral.neck_width_factor = 0.2\ndiagnostics = ld_norm, degree\n"
                           "diagnostics.holder = true\n");
    EXPECT_EQ(cfg.grid_density, 300u);
    EXPECT_EQ(cfg.epsilons.size(), 4u);
    EXPECT_DOUBLE_EQ(cfg.neck_width_factor, 0.2);
    EXPECT_TRUE(cfg.diagnostics.ld_norm);
    EXPECT_FALSE(cfg.diagnostics.sup_norm);
    EXPECT_TRUE(cfg.diagnostics.holder);
    EXPECT_THROW(parse("bogus = 1\n"), ParseError);
    EXPECT_THROW(parse("epsilons = 0.1, 0.2\n"), ParseError);
    EXPECT_THROW(parse("grid_density = 100\n"), ParseError);
    EXPECT_THROW(parse("d = two\n"), ParseError);
    try {
        parse("d = 1\n\nm = x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Harness, CanonicalTextIsOrderIndependent) {
    const auto a = parse("d = 1\nm = 1\n");
    const auto b = parse("m = 1\nd = 1\n");
    EXPECT_EQ(a.canonical(), b.canonical());
    EXPECT_NE(a.canonical(), parse("m = 2\n").canonical());
}

TEST(Harness, StandardSweepIsAContradiction) {
    const SweepConfig cfg;
    const auto rep = run_sweep(cfg);
    ASSERT_TRUE(rep.verdict.has_value());
    EXPECT_EQ(rep.verdict->verdict, Verdict::Contradiction);
    EXPECT_EQ(rep.verdict->limit_degree, 0);
    EXPECT_EQ(rep.exit_code(), 0);
    ASSERT_EQ(rep.per_epsilon.size(), 4u);
    for (const auto& r : rep.per_epsilon) {
        EXPECT_NEAR(*r.ld_norm / (40 * M_PI), 1.0, 1e-4);
        EXPECT_EQ(r.degree_half->rounded, 10);
        EXPECT_EQ(r.degree_other_half->rounded, -10);
        EXPECT_EQ(r.weak_star.size(), 4u);
    }
    EXPECT_TRUE(rep.uniform_bound_ok);
    for (double q : rep.sup_ratios) {
        EXPECT_GE(q, 1.9);
        EXPECT_LE(q, 2.1);
    }
    // Images collapse towards the smallest member.
    EXPECT_EQ(*rep.per_epsilon.back().hausdorff_to_limit, 0.0);
    EXPECT_GT(*rep.per_epsilon.front().hausdorff_to_limit, *rep.per_epsilon[2].hausdorff_to_limit);
}

TEST(Harness, SweepJsonIsDeterministic) {
    SweepConfig cfg;
    cfg.epsilons = {0.2, 0.1, 0.05, 0.025};
    const std::string a = dump_json(to_json(run_sweep(cfg)));
    const std::string b = dump_json(to_json(run_sweep(cfg)));
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("\"schema_version\": 1"), std::string::npos);
    EXPECT_NE(a.find("config_hash"), std::string::npos);
}

TEST(Harness, EmptyDiagnosticsKeepsMetadataOnly) {
    SweepConfig cfg;
    cfg.diagnostics = {false, false, false, false, false, false};
    const auto rep = run_sweep(cfg);
    EXPECT_FALSE(rep.verdict.has_value());
    for (const auto& r : rep.per_epsilon) {
        EXPECT_GT(r.samples, 0u);
        EXPECT_FALSE(r.ld_norm.has_value());
        EXPECT_FALSE(r.degree_half.has_value());
    }
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Harness, TwoDimensionalSweepKeepsUniformBound) {
    SweepConfig cfg;
    cfg.d = 2;
    cfg.grid_density = 200;
    cfg.diagnostics.weak_star = false;
    const auto rep = run_sweep(cfg);
    EXPECT_TRUE(rep.uniform_bound_ok);
    EXPECT_LT(*rep.ld_norm_spread, 1e-3);
    EXPECT_FALSE(rep.verdict.has_value());
    for (const auto& r : rep.per_epsilon) EXPECT_NEAR(r.degree_half->normalised + r.degree_other_half->normalised, 0.0, 1e-6);
}

TEST(Harness, ErrorsNameTheEpsilon) {
    SweepConfig cfg;
    cfg.radial_step = 0.5;  // ten turns cannot fit
    try {
        run_sweep(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("epsilon = "), std::string::npos);
    }
}

TEST(Harness, ReportHelpers) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(dump_json(nlohmann::json{{"x", 0.1}}, -1), "{\"x\":0.10000000000000001}");
    EXPECT_EQ(dump_json(nlohmann::json{{"x", std::nan("")}}, -1), "{\"x\":null}");
    EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
}
