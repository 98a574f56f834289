#include "winding/curve.hpp"

#include "winding/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace winding {

std::vector<double> polyline_weights(const std::vector<Eigen::Vector2d>& points) {
    std::vector<double> w(points.size(), 0.0);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double seg = (points[i + 1] - points[i]).norm();
        w[i] += 0.5 * seg;
        w[i + 1] += 0.5 * seg;
    }
    return w;
}

SampledCurve SampledCurve::from_samples(KernelParams params, std::vector<double> xs,
                                        std::vector<Eigen::Vector2d> points,
                                        std::vector<Eigen::Vector2d> normals,
                                        std::vector<double> curvature) {
    SampledCurve c;
    c.params = params;
    c.xs = std::move(xs);
    c.points = std::move(points);
    c.normals = std::move(normals);
    c.curvature = std::move(curvature);
    c.arc_weights = polyline_weights(c.points);
    c.validate();
    return c;
}

void SampledCurve::validate() const {
    const std::size_t n = xs.size();
    if (n < 2) throw InvalidArgument("curve needs at least two samples");
    if (points.size() != n || normals.size() != n || curvature.size() != n ||
        arc_weights.size() != n) {
        throw InvalidArgument("curve sample arrays differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw InvalidArgument("curve parameters must be strictly increasing");
        }
        if (std::abs(normals[i].norm() - 1.0) > 1e-10) {
            throw InvalidArgument("normal " + std::to_string(i) + " is not unit length");
        }
        if (!(arc_weights[i] > 0.0)) {
            throw InvalidArgument("arc weight " + std::to_string(i) + " is not positive");
        }
    }
}

SpiralConfig SpiralConfig::defaults(const KernelParams& params) {
    SpiralConfig cfg;
    cfg.radial_step = 0.5 / params.turns();
    cfg.out_offset = 0.5 * cfg.radial_step;
    cfg.neck_width = 0.1 * params.epsilon;
    cfg.tail_length = 10.0 * params.epsilon;
    return cfg;
}

void SpiralConfig::validate(const KernelParams& params) const {
    if (!(radial_step > 0.0)) throw InvalidArgument("spiral radial_step must be positive");
    if (!(params.turns() * radial_step < 1.0)) {
        throw InvalidArgument("spiral radial_step * 10^m must be < 1 (radius would reach 0)");
    }
    if (!(out_offset > 0.0 && out_offset < radial_step)) {
        throw InvalidArgument("spiral out_offset must lie in (0, radial_step) or the arms collide");
    }
    if (!(params.turns() * radial_step + out_offset < 1.0)) {
        throw InvalidArgument("spiral inner radius 1 - 10^m radial_step - out_offset must be > 0");
    }
    if (!(neck_width > 0.0 && neck_width < params.epsilon)) {
        throw InvalidArgument("spiral neck_width must lie in (0, epsilon)");
    }
    if (!(tail_length > 0.0)) throw InvalidArgument("spiral tail_length must be positive");
}

Eigen::Vector2d gauss_map_1d(double x, const KernelParams& params) {
    const double t = angle_theta(x, params);
    return {std::cos(t), std::sin(t)};
}

double curvature_1d(double x, const KernelParams& params) {
    return std::abs(angle_rate(x, params));
}

double turning_rate_1d(double x, const KernelParams& params) { return angle_rate(x, params); }

namespace {

// Polar description of the winding region |x| <= 2 eps.
struct SpiralShape {
    KernelParams params;
    SpiralConfig cfg;
    double pitch;      // radius lost per radian of accumulated angle
    double swing;      // angular amplitude of the neck correction
    double two_eps;

    SpiralShape(const KernelParams& p, const SpiralConfig& c)
        : params(p), cfg(c), pitch(c.radial_step / two_pi),
          swing(c.out_offset / (1.0 - p.turns() * c.radial_step)), two_eps(2.0 * p.epsilon) {}

    // Quintic smoothstep over [-w, 0] and its derivative.
    double step(double x) const {
        const double w = cfg.neck_width;
        if (x <= -w) return 0.0;
        if (x >= 0.0) return 1.0;
        const double u = (x + w) / w;
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    }
    double step_rate(double x) const {
        const double w = cfg.neck_width;
        if (x <= -w || x >= 0.0) return 0.0;
        const double u = (x + w) / w;
        return 30.0 * u * u * (1.0 - u) * (1.0 - u) / w;
    }
    // Skewed bump B(t) = (1 - t^2)^2 (1 - t) on |t| < 1: rises, then falls
    // through t = 0 so the neck keeps moving at x = 0.
    double swing_angle(double x) const {
        const double t = x / cfg.neck_width;
        if (std::abs(t) >= 1.0) return 0.0;
        const double q = 1.0 - t * t;
        return swing * q * q * (1.0 - t);
    }
    double swing_rate(double x) const {
        const double t = x / cfg.neck_width;
        if (std::abs(t) >= 1.0) return 0.0;
        return swing * (1.0 - t * t) * (5.0 * t * t - 4.0 * t - 1.0) / cfg.neck_width;
    }

    double radius(double x, double theta) const {
        return 1.0 - pitch * theta - cfg.out_offset * step(x);
    }

    Eigen::Vector2d winding_point(double x) const {
        const double theta = angle_theta(x, params);
        const double rho = radius(x, theta);
        const double phi = theta + swing_angle(x);
        return {rho * std::cos(phi), rho * std::sin(phi)};
    }

    Eigen::Vector2d tail_direction_in() const {
        return Eigen::Vector2d(-pitch, 1.0).normalized();
    }
    Eigen::Vector2d tail_direction_out() const {
        return Eigen::Vector2d(pitch, -(1.0 - cfg.out_offset)).normalized();
    }

    Eigen::Vector2d point(double x) const {
        if (x < -two_eps) {
            return Eigen::Vector2d(1.0, 0.0) + (x + two_eps) * tail_direction_in();
        }
        if (x > two_eps) {
            return Eigen::Vector2d(1.0 - cfg.out_offset, 0.0) + (x - two_eps) * tail_direction_out();
        }
        return winding_point(x);
    }

    // |d n_eps / ds| with n_eps the prescribed Gauss map.
    double curvature(double x) const {
        if (std::abs(x) >= two_eps) return 0.0;
        const double rate = angle_rate(x, params);
        if (rate == 0.0) return 0.0;
        const double theta = angle_theta(x, params);
        const double rho = radius(x, theta);
        if (std::abs(x) >= cfg.neck_width) {
            // Outside the neck rho' = -pitch * theta' and phi' = theta'.
            return 1.0 / std::sqrt(pitch * pitch + rho * rho);
        }
        const double rho_rate = -pitch * rate - cfg.out_offset * step_rate(x);
        const double phi_rate = rate + swing_rate(x);
        return std::abs(rate) / std::hypot(rho_rate, rho * phi_rate);
    }
};

double orient(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const int d1 = sign(orient(q1, q2, p1));
    const int d2 = sign(orient(q1, q2, p2));
    const int d3 = sign(orient(p1, p2, q1));
    const int d4 = sign(orient(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

} // namespace

Grid spiral_grid(const KernelParams& params, const SpiralConfig& cfg, std::size_t density) {
    if (density < 2) throw InvalidArgument("spiral grid density must be >= 2");
    const double half = 2.0 * params.epsilon + cfg.tail_length;
    auto cells = static_cast<std::size_t>(std::llround(2.0 * half / params.epsilon * double(density)));
    if (cells % 2 == 1) ++cells;  // keep x = 0 on a node
    return Grid::line(-half, half, cells + 1);
}

Eigen::Vector2d spiral_point(double x, const KernelParams& params, const SpiralConfig& cfg) {
    return SpiralShape(params, cfg).point(x);
}

SampledCurve build_spiral(const KernelParams& params, const SpiralConfig& cfg, const Grid& grid) {
    params.validate();
    cfg.validate(params);
    grid.validate();
    if (grid.dim() != 1) throw InvalidArgument("spiral grid must be one-dimensional");
    const double need = 2.0 * params.epsilon + cfg.tail_length;
    const double slack = 1e-12 * need;
    if (grid.lo[0] > -need + slack || grid.hi[0] < need - slack) {
        throw InvalidArgument("spiral grid must cover [-2eps - tail_length, 2eps + tail_length]");
    }

    const SpiralShape shape(params, cfg);
    // Where the angle profile is flat to machine precision the winding part
    // stalls; repeated positions are skipped so every sample keeps length.
    std::vector<double> xs;
    std::vector<Eigen::Vector2d> points, normals;
    std::vector<double> kappa;
    for (double x : grid.axis_nodes(0)) {
        const Eigen::Vector2d q = shape.point(x);
        if (!points.empty() && !((q - points.back()).norm() > 0.0)) continue;
        xs.push_back(x);
        points.push_back(q);
        normals.push_back(gauss_map_1d(x, params));
        kappa.push_back(shape.curvature(x));
    }
    if (auto hit = find_self_intersection(points)) {
        throw GeometryError("spiral polyline self-intersects between segments " +
                            std::to_string(hit->first) + " and " + std::to_string(hit->second));
    }
    return SampledCurve::from_samples(params, std::move(xs), std::move(points), std::move(normals),
                                      std::move(kappa));
}

std::optional<std::pair<std::size_t, std::size_t>>
find_self_intersection(const std::vector<Eigen::Vector2d>& points) {
    const std::size_t segs = points.size() < 2 ? 0 : points.size() - 1;
    if (segs < 3) return std::nullopt;

    Eigen::Vector2d lo = points[0], hi = points[0];
    std::vector<double> lengths(segs);
    for (std::size_t i = 0; i < points.size(); ++i) {
        lo = lo.cwiseMin(points[i]);
        hi = hi.cwiseMax(points[i]);
        if (i < segs) lengths[i] = (points[i + 1] - points[i]).norm();
    }
    // Cells at least as long as the longest segment keep every segment in a
    // 2 x 2 block; long sparse segments would otherwise cover many cells.
    const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
    const double longest = *std::max_element(lengths.begin(), lengths.end());
    const double cell = std::max({longest, extent / 4096.0, 1e-300});

    auto key = [](long long cx, long long cy) { return (cx << 32) ^ (cy & 0xffffffffLL); };
    auto cell_of = [&](double v, double origin) {
        return static_cast<long long>(std::floor((v - origin) / cell));
    };
    std::unordered_map<long long, std::vector<std::size_t>> buckets;
    buckets.reserve(segs * 2);
    for (std::size_t i = 0; i < segs; ++i) {
        if (lengths[i] == 0.0) continue;
        const auto& a = points[i];
        const auto& b = points[i + 1];
        for (long long cx = cell_of(std::min(a.x(), b.x()), lo.x());
             cx <= cell_of(std::max(a.x(), b.x()), lo.x()); ++cx) {
            for (long long cy = cell_of(std::min(a.y(), b.y()), lo.y());
                 cy <= cell_of(std::max(a.y(), b.y()), lo.y()); ++cy) {
                buckets[key(cx, cy)].push_back(i);
            }
        }
    }

    std::vector<std::size_t> stamp(segs, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < segs; ++i) {
        if (lengths[i] == 0.0) continue;
        const auto& a = points[i];
        const auto& b = points[i + 1];
        for (long long cx = cell_of(std::min(a.x(), b.x()), lo.x());
             cx <= cell_of(std::max(a.x(), b.x()), lo.x()); ++cx) {
            for (long long cy = cell_of(std::min(a.y(), b.y()), lo.y());
                 cy <= cell_of(std::max(a.y(), b.y()), lo.y()); ++cy) {
                auto it = buckets.find(key(cx, cy));
                if (it == buckets.end()) continue;
                for (std::size_t j : it->second) {
                    if (j <= i + 1 || stamp[j] == i) continue;
                    stamp[j] = i;
                    if (segments_intersect(a, b, points[j], points[j + 1])) return std::pair{i, j};
                }
            }
        }
    }
    return std::nullopt;
}

bool radius_monotone(const SampledCurve& curve, double slack) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double r0 = curve.points[i].norm();
        const double r1 = curve.points[i + 1].norm();
        if (curve.xs[i + 1] <= 0.0 && r1 > r0 + slack) return false;
        if (curve.xs[i] >= 0.0 && r1 < r0 - slack) return false;
    }
    return true;
}

double multi_blowup_angle(double x, const std::vector<BlowupCentre>& centres,
                          const KernelParams& params) {
    for (std::size_t i = 0; i < centres.size(); ++i) {
        if (!(centres[i].radius > 2.0 * params.epsilon)) {
            throw InvalidArgument("blow-up ball " + std::to_string(i + 1) +
                                  " must have radius > 2 epsilon");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(centres[i].x - centres[j].x) < centres[i].radius + centres[j].radius) {
                throw InvalidArgument("blow-up balls " + std::to_string(j + 1) + " and " +
                                      std::to_string(i + 1) + " overlap");
            }
        }
    }
    double total = 0.0;
    double weight = 0.5;
    for (const auto& c : centres) {
        if (weight < 1e-12) break;
        if (std::abs(x - c.x) < c.radius) total += weight * angle_theta(x - c.x, params);
        weight *= 0.5;
    }
    return total;
}

CurveMeasures curve_measures(const SampledCurve& curve) {
    CurveMeasures m;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        m.length += curve.arc_weights[i];
        m.l1_curvature += curve.curvature[i] * curve.arc_weights[i];
        m.sup_curvature = std::max(m.sup_curvature, curve.curvature[i]);
    }
    return m;
}

void write_curve_csv(std::ostream& out, const SampledCurve& curve) {
    out << "x,px,py,nx,ny,kappa,w\n";
    char buf[512];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", curve.xs[i],
                      curve.points[i].x(), curve.points[i].y(), curve.normals[i].x(),
                      curve.normals[i].y(), curve.curvature[i], curve.arc_weights[i]);
        out << buf;
    }
}

SampledCurve read_curve_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty curve file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,px,py,nx,ny,kappa,w") {
        throw ParseError("expected header x,px,py,nx,ny,kappa,w", line_no);
    }
    SampledCurve c;
    c.params = KernelParams::make(0.1, 1);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double v[7];
        std::size_t pos = 0;
        for (int k = 0; k < 7; ++k) {
            const std::size_t end = line.find(',', pos);
            if ((k < 6) != (end != std::string::npos)) {
                throw ParseError("expected 7 comma-separated values", line_no);
            }
            const std::string field = line.substr(pos, end == std::string::npos ? end : end - pos);
            char* stop = nullptr;
            v[k] = std::strtod(field.c_str(), &stop);
            if (field.empty() || stop != field.c_str() + field.size()) {
                throw ParseError("not a number: '" + field + "'", line_no);
            }
            pos = end + 1;
        }
        c.xs.push_back(v[0]);
        c.points.emplace_back(v[1], v[2]);
        c.normals.emplace_back(v[3], v[4]);
        c.curvature.push_back(v[5]);
        c.arc_weights.push_back(v[6]);
    }
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
    }
    return c;
}

} // namespace winding
