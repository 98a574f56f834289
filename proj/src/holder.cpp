#include "winding/holder.hpp"

#include "winding/error.hpp"
#include "winding/parallel.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace winding {
namespace {

// True when two samples share a footprint cell neighbourhood within tol_xy
// but differ in height by more than tol_z.
bool single_valued(const GraphFit& fit) {
    const double cell = fit.tol_xy;
    if (!(cell > 0.0)) return true;
    auto key = [](long long a, long long b) { return (a << 32) ^ (b & 0xffffffffLL); };
    std::unordered_map<long long, std::vector<std::size_t>> grid;
    std::vector<std::pair<long long, long long>> cells(fit.footprints.size());
    for (std::size_t i = 0; i < fit.footprints.size(); ++i) {
        cells[i] = {static_cast<long long>(std::floor(fit.footprints[i].x() / cell)),
                    static_cast<long long>(std::floor(fit.footprints[i].y() / cell))};
        grid[key(cells[i].first, cells[i].second)].push_back(i);
    }
    for (std::size_t i = 0; i < fit.footprints.size(); ++i) {
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(key(cells[i].first + dx, cells[i].second + dy));
                if (it == grid.end()) continue;
                for (std::size_t j : it->second) {
                    if (j <= i) continue;
                    if ((fit.footprints[i] - fit.footprints[j]).norm() < fit.tol_xy &&
                        std::abs(fit.heights[i] - fit.heights[j]) > fit.tol_z) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

} // namespace

GraphFit local_graph_fit(const SampledManifold& mani, std::size_t centre, double radius) {
    if (centre >= mani.size()) throw InvalidArgument("centre index out of range");
    if (!(radius > 0.0)) throw InvalidArgument("fit radius must be positive");
    const auto dist = geodesic_distances(mani, centre);
    GraphFit fit;
    fit.centre = centre;
    fit.radius = radius;
    fit.footprint_dim = mani.dim;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    double wsum = 0.0;
    for (std::size_t i = 0; i < mani.size(); ++i) {
        if (dist[i] <= radius) {
            fit.members.push_back(i);
            sum += mani.weights[i] * mani.normals[i];
            wsum += mani.weights[i];
        }
    }
    if (fit.members.size() < 8) {
        throw InvalidArgument("ball around sample " + std::to_string(centre) + " holds " +
                              std::to_string(fit.members.size()) + " samples; a graph fit needs >= 8");
    }
    const Eigen::Vector3d mean = sum / wsum;
    fit.mean_normal_norm = mean.norm();
    if (fit.mean_normal_norm < 0.1) {
        throw GeometryError("mean normal norm " + std::to_string(fit.mean_normal_norm) +
                            " < 0.1: the ball oscillates too much to be a graph over one plane");
    }
    fit.base_normal = mean / fit.mean_normal_norm;
    Eigen::Vector3d e1, e2;
    if (mani.dim == 1) {
        e1 = Eigen::Vector3d(-fit.base_normal.y(), fit.base_normal.x(), 0.0).normalized();
        e2 = Eigen::Vector3d::Zero();
    } else {
        const Eigen::Vector3d seed =
            std::abs(fit.base_normal.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        e1 = fit.base_normal.cross(seed).normalized();
        e2 = fit.base_normal.cross(e1);
    }
    const Eigen::Vector3d& x = mani.points[centre];
    for (std::size_t i : fit.members) {
        const Eigen::Vector3d rel = mani.points[i] - x;
        fit.footprints.emplace_back(rel.dot(e1), rel.dot(e2));
        fit.heights.push_back(rel.dot(fit.base_normal));
    }
    fit.spacing = mani.median_edge_length();
    fit.tol_xy = 0.5 * fit.spacing;
    fit.tol_z = radius / 10.0;
    fit.graph_ok = single_valued(fit);
    return fit;
}

GraphFit graph_from_samples(const std::vector<double>& u, const std::vector<double>& f) {
    if (u.size() != f.size()) throw InvalidArgument("abscissae and heights differ in length");
    if (u.size() < 8) throw InvalidArgument("a graph fit needs >= 8 samples");
    GraphFit fit;
    fit.footprint_dim = 1;
    std::vector<double> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> gaps;
    for (std::size_t i = 1; i < sorted.size(); ++i) gaps.push_back(sorted[i] - sorted[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    fit.spacing = gaps[gaps.size() / 2];
    fit.radius = 0.5 * (sorted.back() - sorted.front());
    fit.tol_xy = 0.5 * fit.spacing;
    fit.tol_z = fit.radius / 10.0;
    fit.members.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        fit.members[i] = i;
        fit.footprints.emplace_back(u[i], 0.0);
        fit.heights.push_back(f[i]);
    }
    fit.graph_ok = single_valued(fit);
    return fit;
}

HolderEstimate holder_exponent(const GraphFit& fit) {
    if (!fit.graph_ok) throw InvalidArgument("holder_exponent needs a single-valued graph (graph_ok)");
    const std::size_t n = fit.footprints.size();
    if (n < 2) throw InvalidArgument("holder_exponent needs at least two samples");
    double span = 0.0;
    {
        Eigen::Vector2d lo = fit.footprints[0], hi = fit.footprints[0];
        for (const auto& p : fit.footprints) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        span = (hi - lo).norm();
    }
    const double floor_scale = std::max(fit.spacing, 1e-300);
    HolderEstimate est;
    // Ascending scales: span/2, span/4, ... while >= spacing.
    for (double h = 0.5 * span; h >= floor_scale; h *= 0.5) est.scales.push_back(h);
    std::reverse(est.scales.begin(), est.scales.end());
    const std::size_t k = est.scales.size();
    if (k == 0) throw InvalidArgument("footprint span is below the sample spacing");

    // Bin every pair by the smallest scale that contains it, then take a
    // running max over scales.
    std::vector<std::vector<double>> per_row(n, std::vector<double>(k, 0.0));
    parallel_for(n, [&](std::size_t i) {
        auto& row = per_row[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = (fit.footprints[i] - fit.footprints[j]).norm();
            if (dist > est.scales.back()) continue;
            const auto bin = static_cast<std::size_t>(
                std::lower_bound(est.scales.begin(), est.scales.end(), dist) - est.scales.begin());
            row[bin] = std::max(row[bin], std::abs(fit.heights[i] - fit.heights[j]));
        }
    });
    est.oscillations.assign(k, 0.0);
    for (const auto& row : per_row) {
        for (std::size_t b = 0; b < k; ++b) est.oscillations[b] = std::max(est.oscillations[b], row[b]);
    }
    for (std::size_t b = 1; b < k; ++b) est.oscillations[b] = std::max(est.oscillations[b], est.oscillations[b - 1]);

    const double flat_tol = 1e-12 * std::max(fit.radius, span);
    if (est.oscillations.back() <= flat_tol) {
        est.flat = true;
        est.gamma_hat = 1.0;
        est.constant_hat = 0.0;
        est.raw_slope = 1.0;
        est.r2 = 1.0;
        return est;
    }
    std::vector<double> lx, ly;
    if (std::count_if(est.oscillations.begin(), est.oscillations.end(), [&](double o) { return o > flat_tol; }) < 5) {
        throw InvalidArgument("fewer than 5 scales carry a nonzero oscillation");
    }
    // Below a few spacings the discrete max under-reads the oscillation when
    // no sample sits on the worst point; near the span it saturates. Small
    // footprints give up the floor first, then the cap.
    const auto collect = [&](double min_scale, double max_scale) {
        lx.clear();
        ly.clear();
        for (std::size_t b = 0; b < k; ++b) {
            if (est.scales[b] >= min_scale && est.scales[b] <= max_scale && est.oscillations[b] > flat_tol) {
                lx.push_back(std::log(est.scales[b]));
                ly.push_back(std::log(est.oscillations[b]));
            }
        }
    };
    collect(regression_floor_spacings * floor_scale, regression_cap_fraction * span);
    if (lx.size() < 4) collect(0.0, 0.25 * span);
    if (lx.size() < 4) collect(0.0, span);
    const double m = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    est.raw_slope = slope;
    est.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    est.constant_hat = std::exp(intercept);
    est.gamma_hat = slope;
    if (slope > 1.0) {
        est.gamma_hat = 1.0;
        est.clipped = true;
    } else if (!(slope > 0.0)) {
        est.gamma_hat = 1e-6;
        est.clipped = true;
    }
    return est;
}

nlohmann::json to_json(const HolderEstimate& e) {
    return {{"gamma_hat", e.gamma_hat}, {"constant_hat", e.constant_hat}, {"r2", e.r2},
            {"raw_slope", e.raw_slope}, {"clipped", e.clipped},           {"flat", e.flat},
            {"scales", e.scales},       {"oscillations", e.oscillations}};
}

SystemReport graph_system_check(const SampledManifold& mani, const NetCover& net) {
    SystemReport rep;
    rep.balls.resize(net.centres.size());
    parallel_for(net.centres.size(), [&](std::size_t k) {
        BallCheck& b = rep.balls[k];
        b.centre = net.centres[k];
        b.radius = net.radius;
        try {
            const GraphFit fit = local_graph_fit(mani, b.centre, b.radius);
            b.graph_ok = fit.graph_ok;
            if (!fit.graph_ok) {
                b.error = "not single-valued over the mean-normal plane";
                return;
            }
            const HolderEstimate est = holder_exponent(fit);
            b.gamma_hat = est.gamma_hat;
            b.constant_hat = est.constant_hat;
            b.r2 = est.r2;
            b.passed = true;
        } catch (const Error& e) {
            b.error = e.what();
        }
    });
    std::size_t passed = 0;
    bool first = true;
    for (const auto& b : rep.balls) {
        if (!b.passed) continue;
        ++passed;
        rep.min_gamma = first ? b.gamma_hat : std::min(rep.min_gamma, b.gamma_hat);
        rep.max_constant = first ? b.constant_hat : std::max(rep.max_constant, b.constant_hat);
        first = false;
    }
    rep.pass_fraction = rep.balls.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(rep.balls.size());
    return rep;
}

nlohmann::json to_json(const SystemReport& r) {
    nlohmann::json balls = nlohmann::json::array();
    for (const auto& b : r.balls) {
        nlohmann::json j = {{"centre", b.centre},       {"radius", b.radius},       {"graph_ok", b.graph_ok},
                            {"passed", b.passed},       {"gamma_hat", b.gamma_hat}, {"constant_hat", b.constant_hat},
                            {"r2", b.r2}};
        if (!b.error.empty()) j["error"] = b.error;
        balls.push_back(std::move(j));
    }
    return {{"balls", balls},
            {"min_gamma", r.min_gamma},
            {"max_constant", r.max_constant},
            {"pass_fraction", r.pass_fraction}};
}

} // namespace winding
