#include "winding/chordarc.hpp"

#include "winding/error.hpp"
#include "winding/parallel.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace winding {
namespace {

// Samples of one centre ordered by (distance, index), so every ball is a
// prefix of `order`.
struct CentreView {
    std::size_t centre = 0;
    std::vector<double> dist;
    std::vector<std::size_t> order;

    std::size_t count_within(double radius) const {
        const auto it = std::upper_bound(order.begin(), order.end(), radius,
                                         [&](double r, std::size_t i) { return r < dist[i]; });
        return static_cast<std::size_t>(it - order.begin());
    }
};

CentreView make_view(const SampledManifold& mani, std::size_t centre, BallKind kind) {
    CentreView v;
    v.centre = centre;
    v.dist = ball_distances(mani, centre, kind);
    v.order.resize(v.dist.size());
    std::iota(v.order.begin(), v.order.end(), std::size_t{0});
    std::sort(v.order.begin(), v.order.end(), [&](std::size_t a, std::size_t b) {
        return v.dist[a] != v.dist[b] ? v.dist[a] < v.dist[b] : a < b;
    });
    return v;
}

Eigen::Vector3d prefix_mean_normal(const SampledManifold& mani, const CentreView& v, std::size_t k) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    double w = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
        const std::size_t i = v.order[q];
        sum += mani.weights[i] * mani.normals[i];
        w += mani.weights[i];
    }
    return sum / w;
}

BallValue oscillation(const SampledManifold& mani, const CentreView& v, double radius) {
    const std::size_t k = v.count_within(radius);
    if (k < 2) return {};
    const Eigen::Vector3d mean = prefix_mean_normal(mani, v, k);
    double acc = 0.0;
    double w = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
        const std::size_t i = v.order[q];
        acc += mani.weights[i] * (mani.normals[i] - mean).norm();
        w += mani.weights[i];
    }
    return {acc / w, true};
}

BallValue flatness(const SampledManifold& mani, const CentreView& v, double radius) {
    const std::size_t k = v.count_within(radius);
    if (k < 2) return {};
    const Eigen::Vector3d mean = prefix_mean_normal(mani, v, k);
    const Eigen::Vector3d& x = mani.points[v.centre];
    double best = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
        best = std::max(best, std::abs((x - mani.points[v.order[q]]).dot(mean)));
    }
    return {best / radius, true};
}

double chord_ratio(const SampledManifold& mani, std::size_t centre, const std::vector<double>& geo,
                   std::size_t partner) {
    const double chord = (mani.points[centre] - mani.points[partner]).norm();
    return geo[partner] / chord - 1.0;
}

// Area of (triangle origin, p, q) intersected with the disk |z| <= r, signed
// by the orientation of (p, q).
double wedge_disk_area(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double r) {
    const Eigen::Vector2d d = q - p;
    const double a = d.squaredNorm();
    if (a == 0.0) return 0.0;
    const double b = p.dot(d);
    const double c = p.squaredNorm() - r * r;
    double cuts[4] = {0.0, 0.0, 0.0, 1.0};
    int nc = 1;
    const double disc = b * b - a * c;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        for (double t : {(-b - s) / a, (-b + s) / a}) {
            if (t > 0.0 && t < 1.0) cuts[nc++] = t;
        }
    }
    cuts[nc++] = 1.0;
    double area = 0.0;
    for (int k = 0; k + 1 < nc; ++k) {
        const Eigen::Vector2d u = p + cuts[k] * d;
        const Eigen::Vector2d w = p + cuts[k + 1] * d;
        const double cross = u.x() * w.y() - u.y() * w.x();
        const Eigen::Vector2d mid = 0.5 * (u + w);
        if (mid.squaredNorm() <= r * r) {
            area += 0.5 * cross;
        } else {
            area += 0.5 * r * r * std::atan2(cross, u.dot(w));
        }
    }
    return area;
}

double triangle_ball_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                          const Eigen::Vector3d& x, double radius) {
    const Eigen::Vector3d e1 = (b - a).normalized();
    const Eigen::Vector3d nrm = (b - a).cross(c - a).normalized();
    const Eigen::Vector3d e2 = nrm.cross(e1);
    const double off = (x - a).dot(nrm);
    if (std::abs(off) >= radius) return 0.0;
    const double r = std::sqrt(radius * radius - off * off);
    const Eigen::Vector3d o = x - off * nrm;
    auto planar = [&](const Eigen::Vector3d& p) {
        const Eigen::Vector3d rel = p - o;
        return Eigen::Vector2d(rel.dot(e1), rel.dot(e2));
    };
    const Eigen::Vector2d pa = planar(a), pb = planar(b), pc = planar(c);
    return std::abs(wedge_disk_area(pa, pb, r) + wedge_disk_area(pb, pc, r) + wedge_disk_area(pc, pa, r));
}

double segment_ball_length(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& x,
                           double radius) {
    const Eigen::Vector3d d = b - a;
    const double qa = d.squaredNorm();
    if (qa == 0.0) return 0.0;
    const double qb = (a - x).dot(d);
    const double qc = (a - x).squaredNorm() - radius * radius;
    const double disc = qb * qb - qa * qc;
    if (disc <= 0.0) return 0.0;
    const double s = std::sqrt(disc);
    const double t0 = std::max(0.0, (-qb - s) / qa);
    const double t1 = std::min(1.0, (-qb + s) / qa);
    return t1 > t0 ? (t1 - t0) * std::sqrt(qa) : 0.0;
}

double ball_volume(const SampledManifold& mani, const Eigen::Vector3d& x, double radius) {
    double vol = 0.0;
    if (mani.topology == Topology::Mesh) {
        for (const auto& t : mani.triangles) {
            const auto& a = mani.points[t[0]];
            // Cheap rejection: every vertex farther than radius + longest edge.
            const double reach = radius + std::max({(mani.points[t[1]] - a).norm(),
                                                    (mani.points[t[2]] - a).norm()});
            if ((a - x).squaredNorm() > reach * reach) continue;
            vol += triangle_ball_area(a, mani.points[t[1]], mani.points[t[2]], x, radius);
        }
        return vol;
    }
    for (std::size_t i = 0; i < mani.size(); ++i) {
        for (const Edge& e : mani.adjacency[i]) {
            if (e.to < i) continue;
            const auto& a = mani.points[i];
            const double reach = radius + e.length;
            if ((a - x).squaredNorm() > reach * reach) continue;
            vol += segment_ball_length(a, mani.points[e.to], x, radius);
        }
    }
    return vol;
}

bool reaches_boundary(const SampledManifold& mani, const Eigen::Vector3d& x, double radius) {
    for (std::size_t i = 0; i < mani.size(); ++i) {
        if (mani.boundary[i] && (mani.points[i] - x).norm() < radius) return true;
    }
    return false;
}

void check_inputs(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                  const std::vector<double>& radii) {
    if (centres.empty()) throw InvalidArgument("estimator needs at least one centre");
    if (radii.empty()) throw InvalidArgument("estimator needs at least one radius");
    for (std::size_t c : centres) {
        if (c >= mani.size()) throw InvalidArgument("centre index " + std::to_string(c) + " is out of range");
    }
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw InvalidArgument("radii must be positive");
        if (k > 0 && !(radii[k] >= radii[k - 1])) throw InvalidArgument("radii must be sorted");
    }
}

void offer(EstimateResult& best, const BallValue& v, std::size_t centre, double radius, bool& first) {
    if (!v.valid) {
        ++best.skipped;
        return;
    }
    if (first || v.value > best.value) {
        best.value = v.value;
        best.witness = {centre, radius, no_partner, v.value};
        first = false;
    }
}

} // namespace

double intrinsic_diameter(const SampledManifold& mani) {
    if (mani.topology != Topology::Mesh) {
        const auto d = geodesic_distances(mani, 0);
        if (mani.topology == Topology::Path) return d.back();
        return *std::max_element(d.begin(), d.end());
    }
    auto d = geodesic_distances(mani, 0);
    const auto far = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    d = geodesic_distances(mani, far);
    return *std::max_element(d.begin(), d.end());
}

std::vector<double> default_radii(const SampledManifold& mani) {
    const double diameter = intrinsic_diameter(mani);
    const double start = 4.0 * mani.median_edge_length();
    std::vector<double> radii;
    for (double r = start; r < diameter; r *= 2.0) radii.push_back(r);
    radii.push_back(diameter);
    return radii;
}

std::vector<std::size_t> farthest_point_sample(const SampledManifold& mani, std::size_t count) {
    const std::size_t n = mani.size();
    count = std::min(count, n);
    std::vector<std::size_t> picks;
    if (count == 0) return picks;
    std::vector<double> gap(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (picks.size() < count) {
        picks.push_back(next);
        double far = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            gap[i] = std::min(gap[i], (mani.points[i] - mani.points[picks.back()]).norm());
            if (gap[i] > far) {
                far = gap[i];
                next = i;
            }
        }
    }
    return picks;
}

std::vector<std::size_t> default_centres(const SampledManifold& mani, std::size_t max_centres) {
    if (mani.dim == 2) return farthest_point_sample(mani, max_centres > 0 ? max_centres : 256);
    std::vector<std::size_t> all(mani.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (max_centres == 0 || max_centres >= all.size()) return all;
    std::vector<std::size_t> thin;
    for (std::size_t k = 0; k < max_centres; ++k) thin.push_back(k * mani.size() / max_centres);
    return thin;
}

std::vector<double> ball_distances(const SampledManifold& mani, std::size_t centre, BallKind kind) {
    if (kind == BallKind::Geodesic) return geodesic_distances(mani, centre);
    if (centre >= mani.size()) throw InvalidArgument("centre index out of range");
    std::vector<double> d(mani.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (mani.points[i] - mani.points[centre]).norm();
    return d;
}

BallValue ball_volume_defect(const SampledManifold& mani, std::size_t centre, double radius,
                             bool skip_boundary) {
    const Eigen::Vector3d& x = mani.points[centre];
    if (skip_boundary && reaches_boundary(mani, x, radius)) return {};
    const double unit = mani.dim == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
    return {std::abs(ball_volume(mani, x, radius) / unit - 1.0), true};
}

double bmo_at(const SampledManifold& mani, std::size_t centre, double radius, BallKind kind) {
    return oscillation(mani, make_view(mani, centre, kind), radius).value;
}

double gamma2_at(const SampledManifold& mani, std::size_t centre, double radius, BallKind kind) {
    return flatness(mani, make_view(mani, centre, kind), radius).value;
}

double eta1_at(const SampledManifold& mani, std::size_t centre, double radius, bool skip_boundary) {
    return ball_volume_defect(mani, centre, radius, skip_boundary).value;
}

double eta2_at(const SampledManifold& mani, std::size_t centre, std::size_t partner) {
    if (partner >= mani.size() || partner == centre) throw InvalidArgument("eta2 partner must be another sample");
    return chord_ratio(mani, centre, geodesic_distances(mani, centre), partner);
}

namespace {

struct CentreResult {
    EstimateResult bmo, gamma2, eta1;
    Witness eta2;
    bool eta2_valid = false;
};

CentreResult scan_centre(const SampledManifold& mani, std::size_t c, const std::vector<double>& radii,
                         BallKind kind, bool skip_boundary, bool want_means, bool want_eta) {
    CentreResult r;
    CentreView view;
    if (want_means || (want_eta && kind == BallKind::Geodesic)) view = make_view(mani, c, kind);
    bool fb = true, fg = true, fe = true;
    for (double radius : radii) {
        if (want_means) {
            offer(r.bmo, oscillation(mani, view, radius), c, radius, fb);
            offer(r.gamma2, flatness(mani, view, radius), c, radius, fg);
        }
        if (want_eta) offer(r.eta1, ball_volume_defect(mani, c, radius, skip_boundary), c, radius, fe);
    }
    if (want_eta) {
        const std::vector<double> geo =
            kind == BallKind::Geodesic ? view.dist : geodesic_distances(mani, c);
        for (std::size_t y = 0; y < mani.size(); ++y) {
            if (y == c || (mani.points[y] - mani.points[c]).norm() <= 1e-12) continue;
            const double v = chord_ratio(mani, c, geo, y);
            if (!r.eta2_valid || v > r.eta2.value) {
                r.eta2 = {c, 0.0, y, v};
                r.eta2_valid = true;
            }
        }
    }
    return r;
}

std::vector<CentreResult> scan(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                               const std::vector<double>& radii, BallKind kind, bool skip_boundary,
                               bool want_means, bool want_eta) {
    check_inputs(mani, centres, radii);
    std::vector<CentreResult> out(centres.size());
    parallel_for(centres.size(), [&](std::size_t k) {
        out[k] = scan_centre(mani, centres[k], radii, kind, skip_boundary, want_means, want_eta);
    });
    return out;
}

void merge(EstimateResult& into, const EstimateResult& from, bool& first) {
    into.skipped += from.skipped;
    if (from.witness.radius == 0.0) return;  // no valid ball at this centre
    if (first || from.value > into.value) {
        into.value = from.value;
        into.witness = from.witness;
        first = false;
    }
}

} // namespace

EstimateResult bmo_norm(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                        const std::vector<double>& radii, BallKind kind) {
    EstimateResult best;
    bool first = true;
    for (const auto& r : scan(mani, centres, radii, kind, true, true, false)) merge(best, r.bmo, first);
    return best;
}

EstimateResult gamma2_constant(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                               const std::vector<double>& radii, BallKind kind) {
    EstimateResult best;
    bool first = true;
    for (const auto& r : scan(mani, centres, radii, kind, true, true, false)) merge(best, r.gamma2, first);
    return best;
}

EtaResult eta_constants(const SampledManifold& mani, const std::vector<std::size_t>& centres,
                        const std::vector<double>& radii, bool skip_boundary) {
    EtaResult out;
    EstimateResult e1;
    bool first = true, first2 = true;
    for (const auto& r : scan(mani, centres, radii, BallKind::Geodesic, skip_boundary, false, true)) {
        merge(e1, r.eta1, first);
        if (r.eta2_valid && (first2 || r.eta2.value > out.eta2)) {
            out.eta2 = r.eta2.value;
            out.eta2_witness = r.eta2;
            first2 = false;
        }
    }
    out.eta1 = e1.value;
    out.eta1_witness = e1.witness;
    out.skipped = e1.skipped;
    return out;
}

ChordArcReport diagnose(const SampledManifold& mani, const ChordArcOptions& options) {
    mani.validate();
    ChordArcReport rep;
    rep.dim = mani.dim;
    rep.samples = mani.size();
    const auto centres = options.centres.empty() ? default_centres(mani, options.max_centres) : options.centres;
    rep.radii_tested = options.radii.empty() ? default_radii(mani) : options.radii;
    rep.centres_tested = centres.size();
    EstimateResult bmo, g2, e1;
    bool fb = true, fg = true, fe = true, f2 = true;
    for (const auto& r : scan(mani, centres, rep.radii_tested, options.mean_balls, options.skip_boundary_balls,
                              true, true)) {
        merge(bmo, r.bmo, fb);
        merge(g2, r.gamma2, fg);
        merge(e1, r.eta1, fe);
        if (r.eta2_valid && (f2 || r.eta2.value > rep.eta2)) {
            rep.eta2 = r.eta2.value;
            rep.eta2_witness = r.eta2;
            f2 = false;
        }
    }
    rep.bmo = rep.gamma1 = bmo.value;
    rep.bmo_witness = bmo.witness;
    rep.gamma2 = g2.value;
    rep.gamma2_witness = g2.witness;
    rep.gamma = std::max(rep.gamma1, rep.gamma2);
    rep.eta1 = e1.value;
    rep.eta1_witness = e1.witness;
    rep.eta = std::max(rep.eta1, rep.eta2);
    rep.balls_skipped = bmo.skipped + e1.skipped;
    return rep;
}

namespace {

nlohmann::json witness_json(const Witness& w) {
    nlohmann::json j = {{"centre", w.centre}, {"value", w.value}};
    if (w.partner != no_partner) {
        j["partner"] = w.partner;
    } else {
        j["radius"] = w.radius;
    }
    return j;
}

} // namespace

nlohmann::json to_json(const ChordArcReport& r) {
    return {{"dim", r.dim},
            {"samples", r.samples},
            {"bmo", r.bmo},
            {"gamma1", r.gamma1},
            {"gamma2", r.gamma2},
            {"gamma", r.gamma},
            {"eta1", r.eta1},
            {"eta2", r.eta2},
            {"eta", r.eta},
            {"estimates_are_lower_bounds", true},
            {"witnesses",
             {{"bmo", witness_json(r.bmo_witness)},
              {"gamma2", witness_json(r.gamma2_witness)},
              {"eta1", witness_json(r.eta1_witness)},
              {"eta2", witness_json(r.eta2_witness)}}},
            {"radii_tested", r.radii_tested},
            {"centres_tested", r.centres_tested},
            {"balls_skipped", r.balls_skipped}};
}

NetCover build_net(const SampledManifold& mani, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("net radius must be positive");
    mani.validate();
    const std::size_t n = mani.size();
    NetCover net;
    net.radius = radius;
    net.assignment.assign(n, 0);
    net.distance.assign(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (;;) {
        const std::size_t centre = next;
        net.centres.push_back(centre);
        const auto d = geodesic_distances(mani, centre);
        double far = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i] < net.distance[i]) {
                net.distance[i] = d[i];
                net.assignment[i] = centre;
            }
            if (net.distance[i] > far) {
                far = net.distance[i];
                next = i;
            }
        }
        if (far <= radius) break;
    }
    return net;
}

NetHierarchy build_net_with_subnet(const SampledManifold& mani, double radius, double sub_radius) {
    if (!(sub_radius > 0.0 && sub_radius < radius)) {
        throw InvalidArgument("subnet radius must lie in (0, radius)");
    }
    NetHierarchy h;
    h.net = build_net(mani, radius - sub_radius);
    h.subnet = build_net(mani, sub_radius);
    for (std::size_t c : h.subnet.centres) h.parent.push_back(h.net.assignment[c]);
    return h;
}

SemmesConstants semmes_constants(double delta0, double t, int d, double c2, double c3) {
    if (!(delta0 >= 0.0)) throw InvalidArgument("delta0 must be >= 0");
    if (!(t > 0.0)) throw InvalidArgument("t must be positive");
    if (d < 1) throw InvalidArgument("d must be >= 1");
    if (!(c2 > 0.0) || !(c3 > 0.0)) throw InvalidArgument("C2 and C3 must be positive");
    const double dd = static_cast<double>(d);
    if (!(delta0 < 1.0 / (c2 * dd))) {
        throw InvalidArgument("delta0 must be < 1/(C2 d) = " + std::to_string(1.0 / (c2 * dd)) +
                              " for a positive exponent");
    }
    const double denom = 1.0 - 2.0 * std::pow(10.0, dd) * delta0;
    if (!(denom > 0.0)) {
        throw InvalidArgument("delta0 must be < 1/(2 10^d) = " + std::to_string(0.5 / std::pow(10.0, dd)) +
                              " for a positive C1");
    }
    const double e = c2 * delta0;
    return {1.0 - c2 * dd * delta0, std::pow(c3, e) * std::pow(100.0 * t, e) / denom};
}

} // namespace winding
