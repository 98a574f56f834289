#pragma once

// Mean-oscillation and chord-arc estimators on sampled manifolds, greedy
// nets, and the closed-form Holder constants.

#include "winding/manifold.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <limits>
#include <vector>

namespace winding {

enum class BallKind { Geodesic, Ambient };

inline constexpr std::size_t no_partner = std::numeric_limits<std::size_t>::max();

/// A (centre, radius) pair, or a (centre, partner) pair for the chord
/// ratio, together with the value it attains.
struct Witness {
    std::size_t centre = 0;
    double radius = 0.0;
    std::size_t partner = no_partner;
    double value = 0.0;
};

/// Value of one ball, or no value if the ball is skipped.
struct BallValue {
    double value = 0.0;
    bool valid = false;
};

/// Default radii: 4 x median edge, doubling while below the intrinsic
/// diameter, then the diameter itself.
std::vector<double> default_radii(const SampledManifold& mani);

/// Intrinsic diameter: exact for curves, a two-sweep lower bound for meshes.
double intrinsic_diameter(const SampledManifold& mani);

/// Deterministic farthest-point subsample (ambient distance) starting at 0.
std::vector<std::size_t> farthest_point_sample(const SampledManifold& mani, std::size_t count);

/// All samples for curves (thinned to an even stride past max_centres when
/// max_centres > 0), 256 farthest points for surfaces.
std::vector<std::size_t> default_centres(const SampledManifold& mani, std::size_t max_centres = 0);

/// |Vol(M cap B_amb(x, R)) / (omega_d R^d) - 1| by exact clipping of segments
/// or triangles. Skipped when the ball reaches a boundary sample and
/// `skip_boundary` is set.
BallValue ball_volume_defect(const SampledManifold& mani, std::size_t centre, double radius,
                             bool skip_boundary = true);

/// Distances used for balls of the given kind.
std::vector<double> ball_distances(const SampledManifold& mani, std::size_t centre, BallKind kind);

/// Recompute a single witness from scratch.
double bmo_at(const SampledManifold& mani, std::size_t centre, double radius,
              BallKind kind = BallKind::Geodesic);
double gamma2_at(const SampledManifold& mani, std::size_t centre, double radius,
                 BallKind kind = BallKind::Geodesic);
double eta1_at(const SampledManifold& mani, std::size_t centre, double radius, bool skip_boundary = true);
double eta2_at(const SampledManifold& mani, std::size_t centre, std::size_t partner);

struct EstimateResult {
    double value = 0.0;
    Witness witness;
    std::size_t skipped = 0;
};

EstimateResult bmo_norm(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                        const std::vector<double>& radii, BallKind kind = BallKind::Geodesic);
EstimateResult gamma2_constant(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                               const std::vector<double>& radii, BallKind kind = BallKind::Geodesic);

struct EtaResult {
    double eta1 = 0.0;
    double eta2 = 0.0;
    Witness eta1_witness;
    Witness eta2_witness;
    std::size_t skipped = 0;
};

EtaResult eta_constants(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                        const std::vector<double>& radii, bool skip_boundary = true);

struct ChordArcOptions {
    /// Empty means default_centres / default_radii.
    std::vector<std::size_t> centres;
    std::vector<double> radii;
    std::size_t max_centres = 0;
    BallKind mean_balls = BallKind::Geodesic;
    bool skip_boundary_balls = true;
};

struct ChordArcReport {
    double bmo = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta = 0.0;
    Witness bmo_witness;
    Witness gamma2_witness;
    Witness eta1_witness;
    Witness eta2_witness;
    std::vector<double> radii_tested;
    std::size_t centres_tested = 0;
    std::size_t balls_skipped = 0;
    std::size_t samples = 0;
    int dim = 1;
};

ChordArcReport diagnose(const SampledManifold& mani, const ChordArcOptions& options = {});
nlohmann::json to_json(const ChordArcReport& report);

struct NetCover {
    double radius = 0.0;
    std::vector<std::size_t> centres;
    /// Covering centre (sample index) per sample.
    std::vector<std::size_t> assignment;
    /// Geodesic distance from each sample to its assigned centre.
    std::vector<double> distance;
};

/// Greedy farthest-point cover in geodesic distance: every sample ends up
/// within `radius` of its centre.
NetCover build_net(const SampledManifold& mani, double radius);

struct NetHierarchy {
    NetCover net;
    NetCover subnet;
    /// Parent centre (sample index) per subnet centre.
    std::vector<std::size_t> parent;
};

/// Net at radius - sub_radius plus a sub_radius subnet; each subnet ball is
/// contained in the ball of radius `radius` around its parent.
NetHierarchy build_net_with_subnet(const SampledManifold& mani, double radius, double sub_radius);

struct SemmesConstants {
    double gamma = 1.0;
    double c1 = 1.0;
};

/// gamma = 1 - C2 d delta0, C1 = C3^{C2 delta0} (100 t)^{C2 delta0} / (1 - 2 10^d delta0).
/// Throws InvalidArgument when delta0 >= 1/(C2 d) or delta0 >= 1/(2 10^d).
SemmesConstants semmes_constants(double delta0, double t, int d, double c2, double c3);

} // namespace winding
