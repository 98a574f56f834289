#pragma once

// Degrees (winding numbers and normalised pullback integrals), weak-*
// pairings of K_eps, and the verdict comparing a family with its pointwise
// limit.

#include "winding/hyper.hpp"
#include "winding/kernel.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace winding {

struct DegreeReport {
    std::string region;
    std::string method;
    double raw_integral = 0.0;
    double normalised = 0.0;
    long long rounded = 0;
    double residual = 0.0;

    /// residual < 0.01.
    bool certified() const;
};

nlohmann::json to_json(const DegreeReport& report);

/// Builds a report from a normalised value, rounding to the nearest integer.
DegreeReport make_degree_report(std::string region, std::string method, double raw, double normalised);

/// (theta_end - theta_start) / 2pi for a continuous (unwrapped) angle path.
/// Throws AliasingError if two consecutive samples differ by pi or more.
DegreeReport winding_number(const std::vector<double>& thetas);

/// Winding of a sampled unit-vector path, summing principal angle
/// increments. Throws AliasingError if an increment is within 1% of pi.
DegreeReport winding_of_normals(const std::vector<Eigen::Vector2d>& normals);

/// Axis-aligned box in parameter space.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Integral of the degree density over `region` divided by Vol(S^d).
/// Sampled at the field grid spacing (rounded up to an odd node count per
/// axis); throws ResolutionError when the half-resolution value differs by
/// more than 1e-3 (absolute, in degree units) and InvalidArgument when the
/// spacing exceeds eps/100.
DegreeReport degree_by_integration(const SphericalGaussField& field, const Box& region);

struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// The four calibration functions: one, identity, sine and a fixed bump.
std::vector<TestFunction> standard_test_functions();

struct WeakStarReport {
    double epsilon = 0.0;
    std::string test_function;
    double pairing = 0.0;
    double bound = 0.0;

    /// |pairing| <= bound * (1 + 1e-6) + 1e-12 (the floor absorbs rounding when phi is constant).
    bool within_bound() const;
};

nlohmann::json to_json(const WeakStarReport& report);

/// int K_eps phi over [-2eps, 2eps] by composite Simpson at `density` cells
/// per epsilon; bound = 2 eps sup |phi'| over the sampled support.
WeakStarReport weak_star_pairing(const KernelParams& params, const TestFunction& phi,
                                 std::size_t density = 400);

/// Degree of the pointwise limit of the Gauss maps along the sampled
/// parameters `xs` (all nonzero, one side of 0): for every such x the angle
/// vanishes once eps < |x|/2, so the path is evaluated at eps* = min|x|/4.
DegreeReport pointwise_limit_degree(const std::vector<double>& xs, int m);

struct VerdictEntry {
    double epsilon = 0.0;
    DegreeReport degree;
    DegreeReport limit;
};

enum class Verdict { Contradiction, Inconclusive };

struct VerdictRecord {
    std::string family_id;
    int m = 1;
    std::vector<double> epsilons;
    std::vector<long long> per_epsilon_degree;
    long long limit_degree = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> diagnostics;
};

std::string to_string(Verdict v);
nlohmann::json to_json(const VerdictRecord& record);

/// CONTRADICTION when every per-eps degree is certified and equal to some D
/// while every limit degree is certified and differs from D; INCONCLUSIVE
/// otherwise. Throws InvalidArgument unless there are >= 4 strictly
/// decreasing epsilons with a constant ratio.
VerdictRecord nonconvergence_verdict(const std::string& family_id, int m,
                                     const std::vector<VerdictEntry>& sweep);

} // namespace winding
