#include "winding/error.hpp"
#include "winding/hyper.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace winding;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, std::size_t d, double eps) {
    std::uniform_real_distribution<double> u(-2 * eps, 2 * eps);
    std::vector<double> x(d);
    for (auto& v : x) v = u(rng);
    return x;
}

} // namespace

TEST(Hyper, SphereVolumes) {
    EXPECT_NEAR(sphere_volume(1), 2 * M_PI, 1e-14);
    EXPECT_NEAR(sphere_volume(2), 4 * M_PI, 1e-14);
    EXPECT_NEAR(sphere_volume(3), 2 * M_PI * M_PI, 1e-13);
}

TEST(Hyper, GaussMapIsUnit) {
    std::mt19937_64 rng(7);
    const auto p = KernelParams::make(0.1, 1);
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto f = SphericalGaussField::make(d, p, 20);
        for (int k = 0; k < 20; ++k) EXPECT_NEAR(gauss_map_nd(random_point(rng, d, 0.1), f).norm(), 1.0, 1e-14);
    }
}

TEST(Hyper, JacobianMatchesCentralDifferences) {
    std::mt19937_64 rng(20240601);
    const auto p = KernelParams::make(0.2, 1);
    for (std::size_t d : {2u, 3u}) {
        const auto f = SphericalGaussField::make(d, p, 20);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto x = random_point(rng, d, 0.2);
            const Eigen::MatrixXd jac = jacobian_rows(x, f);
            ASSERT_EQ(jac.rows(), static_cast<Eigen::Index>(d));
            ASSERT_EQ(jac.cols(), static_cast<Eigen::Index>(d + 1));
            const double h = 1e-5;
            for (std::size_t i = 0; i < d; ++i) {
                const auto at = [&](double off) {
                    auto y = x;
                    y[i] += off;
                    return gauss_map_nd(y, f);
                };
                // Fourth-order stencil: the two-point one leaves ~3e-4 of
                // truncation error at this epsilon.
                const Eigen::VectorXd fd = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
                worst = std::max(worst, (jac.row(static_cast<Eigen::Index>(i)).transpose() - fd).cwiseAbs().maxCoeff());
            }
        }
        EXPECT_LT(worst, 1e-6) << "d = " << d;
    }
}

TEST(Hyper, FrobeniusAndDeterminantClosedForms) {
    std::mt19937_64 rng(3);
    const auto p = KernelParams::make(0.1, 1);
    for (std::size_t d : {1u, 2u, 3u}) {
        const auto f = SphericalGaussField::make(d, p, 20);
        for (int trial = 0; trial < 30; ++trial) {
            const auto x = random_point(rng, d, 0.1);
            const Eigen::MatrixXd jac = jacobian_rows(x, f);
            EXPECT_NEAR(jacobian_frobenius(x, f), jac.norm(), 1e-9 * std::max(1.0, jac.norm()));
            const double det = degree_integrand(x, f);
            const double closed = degree_integrand_closed_form(x, f);
            EXPECT_NEAR(det, closed, 1e-8 * std::max(1.0, std::abs(closed)));
            double s = 0.0;
            for (double xi : x) s += std::pow(angle_rate(xi, p), 2);
            EXPECT_NEAR(second_form_norm(x, f), std::sqrt(s), 1e-9 * std::max(1.0, std::sqrt(s)));
        }
    }
}

TEST(Hyper, OneDimensionalNormIsFourPiTenToTheM) {
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const auto f = SphericalGaussField::make(1, KernelParams::make(eps, 1), 400);
        const auto r = ld_norm_identity(f);
        EXPECT_NEAR(r.ld_norm / (40 * M_PI), 1.0, 1e-4) << eps;
        EXPECT_NEAR(r.factored / (40 * M_PI), 1.0, 1e-6) << eps;
    }
}

TEST(Hyper, NormIsEpsilonInvariantInHigherDimensions) {
    for (std::size_t d : {2u, 3u}) {
        const auto a = ld_norm_identity(SphericalGaussField::make(d, KernelParams::make(0.2, 1), 100));
        const auto b = ld_norm_identity(SphericalGaussField::make(d, KernelParams::make(0.1, 1), 100));
        EXPECT_NEAR(a.ld_norm / b.ld_norm, 1.0, 1e-9) << d;
    }
}

TEST(Hyper, SupNormBlowsUpLikeOneOverEpsilon) {
    const double lam = mollifier_normalisation();
    for (double eps : {0.4, 0.2, 0.1}) {
        const auto f = SphericalGaussField::make(1, KernelParams::make(eps, 1), 400);
        EXPECT_NEAR(sup_second_form_norm(f) / (2 * M_PI * 10 * lam / (std::exp(1.0) * eps)), 1.0, 1e-3);
    }
}

TEST(Hyper, RejectsCoarseGridsAndHighDimension) {
    const auto p = KernelParams::make(0.1, 1);
    EXPECT_THROW(ld_norm_identity(SphericalGaussField::make(1, p, 20)), InvalidArgument);
    EXPECT_THROW(SphericalGaussField::make(0, p, 20).validate(), InvalidArgument);
}

TEST(Hyper, FieldSummaryDegreeIntegralVanishes) {
    for (std::size_t d : {1u, 2u}) {
        const auto s = summarise_field(SphericalGaussField::make(d, KernelParams::make(0.1, 1), 100));
        EXPECT_NEAR(s.total_degree_integral, 0.0, 1e-6);
    }
}
