#pragma once

// Epsilon-family sweeps: build each member, run the enabled diagnostics,
// compare against the limit, and assemble one deterministic report.

#include "winding/chordarc.hpp"
#include "winding/curve.hpp"
#include "winding/topo.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace winding {

inline constexpr int sweep_schema_version = 1;

struct DiagnosticFlags {
    bool ld_norm = true;
    bool sup_norm = true;
    bool degree = true;
    bool weak_star = true;
    bool chordarc = false;
    bool holder = false;
};

struct SweepConfig {
    std::string family_id = "spiral";
    int d = 1;
    int m = 1;
    std::vector<double> epsilons = {0.4, 0.2, 0.1, 0.05};
    /// Samples per epsilon (curve grid for d = 1, field grid for d = 2;
    /// d >= 3 fields use 100 per epsilon).
    std::size_t grid_density = 400;
    /// Zero selects the default 10^-m / 2 and radial_step / 2.
    double radial_step = 0.0;
    double out_offset = 0.0;
    /// Neck width and tail length as multiples of epsilon.
    double neck_width_factor = 0.1;
    double tail_length_factor = 10.0;
    std::size_t chordarc_max_centres = 256;
    /// Net radius for Holder checks, as a multiple of epsilon.
    double holder_radius_factor = 0.5;
    DiagnosticFlags diagnostics;

    /// Throws InvalidArgument: d in [1, 4], m in [1, 12], epsilons strictly
    /// decreasing and positive, grid_density >= 200.
    void validate() const;

    /// Spiral parameters for one epsilon.
    SpiralConfig spiral_for(const KernelParams& params) const;

    /// Canonical text (one key = value per line, sorted keys) used for hashing.
    std::string canonical() const;
};

/// Parses "key = value" lines; '#' starts a comment. Keys: family_id, d, m,
/// epsilons (comma list), grid_density, spiral.radial_step,
/// spiral.out_offset, spiral.neck_width_factor, spiral.tail_length_factor,
/// chordarc.max_centres, holder.radius_factor, diagnostics (comma list of
/// flags, or "none"), and diagnostics.<flag> = true|false. Throws ParseError.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

struct EpsilonRecord {
    double epsilon = 0.0;
    std::size_t samples = 0;
    std::optional<double> ld_norm;
    std::optional<double> sup_norm;
    std::optional<DegreeReport> degree_half;
    std::optional<DegreeReport> degree_other_half;
    std::optional<DegreeReport> limit_degree;
    std::optional<double> hausdorff_to_limit;
    std::optional<double> length;
    std::optional<double> l1_curvature;
    std::vector<WeakStarReport> weak_star;
    std::optional<ChordArcReport> chordarc;
    std::optional<double> holder_pass_fraction;
    std::optional<double> holder_min_gamma;
};

struct SweepReport {
    SweepConfig config;
    std::vector<EpsilonRecord> per_epsilon;
    std::optional<VerdictRecord> verdict;
    /// (max - min) / max of ld_norm across epsilons, when computed.
    std::optional<double> ld_norm_spread;
    bool uniform_bound_ok = true;
    /// sup(eps_{k+1}) / sup(eps_k) for consecutive epsilons.
    std::vector<double> sup_ratios;
    std::string config_hash;

    /// 0 for CONTRADICTION (d = 1) or a passing uniform bound (d >= 2), 2 otherwise.
    int exit_code() const;
};

SweepReport run_sweep(const SweepConfig& cfg);
nlohmann::json to_json(const SweepReport& report);

/// Symmetric Hausdorff distance using a uniform hash grid over each set.
double hausdorff_distance(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b);
double hausdorff_distance(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b);

/// Restriction of a curve to lo <= x <= hi with recomputed arc weights.
/// Throws InvalidArgument if the window leaves the parameter range or holds
/// fewer than two samples.
SampledCurve localize(const SampledCurve& curve, double lo, double hi);

} // namespace winding
