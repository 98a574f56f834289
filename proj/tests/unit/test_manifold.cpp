#include "winding/error.hpp"
#include "winding/manifold.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace winding;

TEST(Manifold, GeneratorsValidate) {
    EXPECT_NO_THROW(make_circle(64).validate());
    EXPECT_NO_THROW(make_segment(10).validate());
    EXPECT_NO_THROW(make_flat_patch(9).validate());
    const auto s = make_icosphere(2);
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.size(), 162u);
    EXPECT_EQ(make_icosphere(4).size(), 2562u);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_NEAR(s.points[i].norm(), 1.0, 1e-12);
        EXPECT_GT(s.normals[i].dot(s.points[i]), 0.99);
    }
}

TEST(Manifold, WeightsSumToMeasure) {
    double total = 0.0;
    for (double w : make_flat_patch(11, 1.0).weights) total += w;
    EXPECT_NEAR(total, 4.0, 1e-12);
    total = 0.0;
    for (double w : make_segment(11, 2.0).weights) total += w;
    EXPECT_NEAR(total, 2.0, 1e-12);
}

TEST(Manifold, MeshTextRoundTrip) {
    const auto a = make_icosphere(1);
    std::stringstream ss;
    write_mesh_text(ss, a);
    const auto b = read_mesh_text(ss);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.triangles.size(), b.triangles.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LE((a.points[i] - b.points[i]).norm(), 1e-12);
        EXPECT_LE((a.normals[i] - b.normals[i]).norm(), 1e-12);
    }
}

TEST(Manifold, MeshParseErrors) {
    std::stringstream unknown("v 0 0 0\nq 1 2\n");
    try {
        read_mesh_text(unknown);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::stringstream range("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n");
    EXPECT_THROW(read_mesh_text(range), ParseError);
    std::stringstream nofaces("v 0 0 0\n");
    EXPECT_THROW(read_mesh_text(nofaces), ParseError);
}

TEST(Manifold, DisconnectedMeshIsNamed) {
    std::stringstream two("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 5 5 0\nv 6 5 0\nv 5 6 0\nf 1 2 3\nf 4 5 6\n");
    try {
        read_mesh_text(two).validate();
        FAIL();
    } catch (const ConnectivityError& e) {
        EXPECT_NE(std::string(e.what()).find("unreachable"), std::string::npos);
    }
}

TEST(Manifold, EdgeLengthsAreEuclidean) {
    const auto m = make_icosphere(2);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (const auto& e : m.adjacency[i]) EXPECT_NEAR(e.length, (m.points[i] - m.points[e.to]).norm(), 1e-10);
    }
}

TEST(Manifold, CurveGeodesicsAreArclength) {
    const auto c = make_circle(400);
    const auto d = geodesic_distances(c, 0);
    EXPECT_NEAR(d[200], 200 * 2 * std::sin(M_PI / 400), 1e-12);
    EXPECT_NEAR(d[399], 2 * std::sin(M_PI / 400), 1e-12);
    const auto s = make_segment(11, 1.0);
    EXPECT_NEAR(geodesic_distances(s, 0)[10], 1.0, 1e-12);
    EXPECT_THROW(geodesic_distances(s, 99), InvalidArgument);
}

TEST(Manifold, SphereGeodesicsApproachGreatCircles) {
    double prev = 1.0;
    for (std::size_t sub : {3u, 4u}) {
        const auto m = make_icosphere(sub);
        const auto d = geodesic_distances(m, 0);
        double worst = 0.0;
        for (std::size_t i = 1; i < m.size(); ++i) {
            const double exact = std::acos(std::clamp(m.points[0].dot(m.points[i]), -1.0, 1.0));
            if (exact > 1e-6) worst = std::max(worst, std::abs(d[i] - exact) / exact);
            EXPECT_LE(d[i], M_PI * 1.03);
        }
        EXPECT_LT(worst, 0.03) << sub;
        EXPECT_LT(worst, prev);
        prev = worst;
    }
}

TEST(Manifold, FlatPatchGeodesicsAreStraight) {
    const auto m = make_flat_patch(21, 1.0);
    const auto d = geodesic_distances(m, 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_NEAR(d[i], (m.points[i] - m.points[0]).norm(), 1e-9);
    }
}

TEST(Manifold, AmbientDiameter) {
    EXPECT_NEAR(make_circle(100).ambient_diameter(), 2.0, 1e-12);
    EXPECT_NEAR(make_flat_patch(5, 1.0).ambient_diameter(), 2 * std::sqrt(2.0), 1e-12);
}
