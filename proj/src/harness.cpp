#include "winding/harness.hpp"

#include "winding/error.hpp"
#include "winding/holder.hpp"
#include "winding/hyper.hpp"
#include "winding/manifold.hpp"
#include "winding/parallel.hpp"
#include "winding/report.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace winding {

void SweepConfig::validate() const {
    if (d < 1 || d > 4) throw InvalidArgument("d must lie in [1, 4], got " + std::to_string(d));
    if (m < 1 || m > 12) throw InvalidArgument("m must lie in [1, 12], got " + std::to_string(m));
    if (epsilons.empty()) throw InvalidArgument("epsilons must not be empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
            throw InvalidArgument("epsilons must be positive and finite");
        }
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
            throw InvalidArgument("epsilons must be strictly decreasing");
        }
    }
    if (grid_density < 200) {
        throw InvalidArgument("grid_density must be >= 200, got " + std::to_string(grid_density));
    }
    if (radial_step < 0.0 || out_offset < 0.0) throw InvalidArgument("spiral sizes must be >= 0");
    if (!(neck_width_factor > 0.0 && neck_width_factor < 1.0)) {
        throw InvalidArgument("spiral.neck_width_factor must lie in (0, 1)");
    }
    if (!(tail_length_factor > 0.0)) throw InvalidArgument("spiral.tail_length_factor must be positive");
    if (!(holder_radius_factor > 0.0)) throw InvalidArgument("holder.radius_factor must be positive");
}

SpiralConfig SweepConfig::spiral_for(const KernelParams& params) const {
    SpiralConfig s = SpiralConfig::defaults(params);
    if (radial_step > 0.0) s.radial_step = radial_step;
    s.out_offset = out_offset > 0.0 ? out_offset : 0.5 * s.radial_step;
    s.neck_width = neck_width_factor * params.epsilon;
    s.tail_length = tail_length_factor * params.epsilon;
    return s;
}

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string list_text(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
}

} // namespace

std::string SweepConfig::canonical() const {
    std::map<std::string, std::string> kv = {
        {"family_id", family_id},
        {"d", std::to_string(d)},
        {"m", std::to_string(m)},
        {"epsilons", list_text(epsilons)},
        {"grid_density", std::to_string(grid_density)},
        {"spiral.radial_step", format_double(radial_step)},
        {"spiral.out_offset", format_double(out_offset)},
        {"spiral.neck_width_factor", format_double(neck_width_factor)},
        {"spiral.tail_length_factor", format_double(tail_length_factor)},
        {"chordarc.max_centres", std::to_string(chordarc_max_centres)},
        {"holder.radius_factor", format_double(holder_radius_factor)},
        {"diagnostics.ld_norm", bool_text(diagnostics.ld_norm)},
        {"diagnostics.sup_norm", bool_text(diagnostics.sup_norm)},
        {"diagnostics.degree", bool_text(diagnostics.degree)},
        {"diagnostics.weak_star", bool_text(diagnostics.weak_star)},
        {"diagnostics.chordarc", bool_text(diagnostics.chordarc)},
        {"diagnostics.holder", bool_text(diagnostics.holder)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw ParseError("not a number: '" + t + "'", line);
    return v;
}

long long parse_int(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) throw ParseError("not an integer: '" + t + "'", line);
    return v;
}

bool parse_bool(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    throw ParseError("not a boolean: '" + t + "'", line);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

bool* flag_slot(DiagnosticFlags& f, const std::string& name) {
    if (name == "ld_norm") return &f.ld_norm;
    if (name == "sup_norm") return &f.sup_norm;
    if (name == "degree") return &f.degree;
    if (name == "weak_star") return &f.weak_star;
    if (name == "chordarc") return &f.chordarc;
    if (name == "holder") return &f.holder;
    return nullptr;
}

} // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "family_id") {
            cfg.family_id = value;
        } else if (key == "d") {
            cfg.d = static_cast<int>(parse_int(value, line_no));
        } else if (key == "m") {
            cfg.m = static_cast<int>(parse_int(value, line_no));
        } else if (key == "epsilons") {
            cfg.epsilons.clear();
            for (const auto& part : split_commas(value)) cfg.epsilons.push_back(parse_double(part, line_no));
        } else if (key == "grid_density") {
            const long long v = parse_int(value, line_no);
            if (v < 0) throw ParseError("grid_density must be nonnegative", line_no);
            cfg.grid_density = static_cast<std::size_t>(v);
        } else if (key == "spiral.radial_step") {
            cfg.radial_step = parse_double(value, line_no);
        } else if (key == "spiral.out_offset") {
            cfg.out_offset = parse_double(value, line_no);
        } else if (key == "spiral.neck_width_factor") {
            cfg.neck_width_factor = parse_double(value, line_no);
        } else if (key == "spiral.tail_length_factor") {
            cfg.tail_length_factor = parse_double(value, line_no);
        } else if (key == "chordarc.max_centres") {
            const long long v = parse_int(value, line_no);
            if (v < 0) throw ParseError("chordarc.max_centres must be nonnegative", line_no);
            cfg.chordarc_max_centres = static_cast<std::size_t>(v);
        } else if (key == "holder.radius_factor") {
            cfg.holder_radius_factor = parse_double(value, line_no);
        } else if (key == "diagnostics") {
            cfg.diagnostics = {false, false, false, false, false, false};
            if (value != "none" && !value.empty()) {
                for (const auto& name : split_commas(value)) {
                    bool* slot = flag_slot(cfg.diagnostics, name);
                    if (!slot) throw ParseError("unknown diagnostic '" + name + "'", line_no);
                    *slot = true;
                }
            }
        } else if (key.rfind("diagnostics.", 0) == 0) {
            bool* slot = flag_slot(cfg.diagnostics, key.substr(12));
            if (!slot) throw ParseError("unknown diagnostic '" + key.substr(12) + "'", line_no);
            *slot = parse_bool(value, line_no);
        } else {
            throw ParseError("unknown key '" + key + "'", line_no);
        }
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_sweep_config(in);
}

namespace {

struct Member {
    EpsilonRecord record;
    std::vector<Eigen::Vector2d> image;
};

Member run_curve_member(const SweepConfig& cfg, double eps) {
    Member out;
    EpsilonRecord& rec = out.record;
    rec.epsilon = eps;
    const KernelParams params = KernelParams::make(eps, cfg.m);
    const SpiralConfig spiral = cfg.spiral_for(params);
    const SampledCurve curve = build_spiral(params, spiral, spiral_grid(params, spiral, cfg.grid_density));
    rec.samples = curve.size();
    out.image = curve.points;

    const SampledCurve core = localize(curve, -2.0 * eps, 2.0 * eps);
    const CurveMeasures measures = curve_measures(core);
    rec.length = measures.length;
    rec.l1_curvature = measures.l1_curvature;

    if (cfg.diagnostics.ld_norm || cfg.diagnostics.sup_norm) {
        const auto field = SphericalGaussField::make(1, params, cfg.grid_density);
        if (cfg.diagnostics.ld_norm) rec.ld_norm = ld_norm_identity(field).ld_norm;
        if (cfg.diagnostics.sup_norm) rec.sup_norm = sup_second_form_norm(field);
    }
    if (cfg.diagnostics.degree) {
        std::vector<double> left, right, left_x;
        for (double x : curve.xs) {
            if (x <= 0.0) left.push_back(angle_theta(x, params));
            if (x >= 0.0) right.push_back(angle_theta(x, params));
            if (x < 0.0) left_x.push_back(x);
        }
        DegreeReport l = winding_number(left);
        l.region = "(-inf,0]";
        DegreeReport r = winding_number(right);
        r.region = "[0,inf)";
        rec.degree_half = l;
        rec.degree_other_half = r;
        rec.limit_degree = pointwise_limit_degree(left_x, cfg.m);
    }
    if (cfg.diagnostics.weak_star) {
        for (const auto& phi : standard_test_functions()) rec.weak_star.push_back(weak_star_pairing(params, phi));
    }
    if (cfg.diagnostics.chordarc || cfg.diagnostics.holder) {
        const SampledManifold mani = manifold_from_curve(curve);
        if (cfg.diagnostics.chordarc) {
            ChordArcOptions opt;
            opt.max_centres = cfg.chordarc_max_centres;
            rec.chordarc = diagnose(mani, opt);
        }
        if (cfg.diagnostics.holder) {
            const SystemReport sys = graph_system_check(mani, build_net(mani, cfg.holder_radius_factor * eps));
            rec.holder_pass_fraction = sys.pass_fraction;
            rec.holder_min_gamma = sys.min_gamma;
        }
    }
    return out;
}

Member run_field_member(const SweepConfig& cfg, double eps) {
    Member out;
    EpsilonRecord& rec = out.record;
    rec.epsilon = eps;
    const KernelParams params = KernelParams::make(eps, cfg.m);
    const std::size_t per_eps = cfg.d == 2 ? cfg.grid_density : 100;
    const auto field = SphericalGaussField::make(static_cast<std::size_t>(cfg.d), params, per_eps);
    rec.samples = field.grid.node_count();
    if (cfg.diagnostics.ld_norm) rec.ld_norm = ld_norm_identity(field).ld_norm;
    if (cfg.diagnostics.sup_norm) rec.sup_norm = sup_second_form_norm(field);
    if (cfg.diagnostics.degree) {
        Box lower{std::vector<double>(cfg.d, -2.0 * eps), std::vector<double>(cfg.d, 2.0 * eps)};
        Box upper = lower;
        lower.hi[0] = 0.0;
        upper.lo[0] = 0.0;
        rec.degree_half = degree_by_integration(field, lower);
        rec.degree_other_half = degree_by_integration(field, upper);
    }
    if (cfg.diagnostics.weak_star) {
        for (const auto& phi : standard_test_functions()) rec.weak_star.push_back(weak_star_pairing(params, phi));
    }
    return out;
}

} // namespace

SweepReport run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepReport rep;
    rep.config = cfg;
    rep.config_hash = hex64(fnv1a64(cfg.canonical()));
    std::vector<Member> members(cfg.epsilons.size());
    parallel_for(members.size(), [&](std::size_t k) {
        const double eps = cfg.epsilons[k];
        try {
            members[k] = cfg.d == 1 ? run_curve_member(cfg, eps) : run_field_member(cfg, eps);
        } catch (const Error& e) {
            throw Error("epsilon = " + format_double(eps) + ": " + e.what());
        }
    });
    if (cfg.d == 1) {
        // The limit object is the image of the smallest-epsilon member.
        const auto& limit = members.back().image;
        std::vector<double> dist(members.size());
        parallel_for(members.size(), [&](std::size_t k) { dist[k] = hausdorff_distance(members[k].image, limit); });
        for (std::size_t k = 0; k < members.size(); ++k) members[k].record.hausdorff_to_limit = dist[k];
    }
    for (auto& m : members) rep.per_epsilon.push_back(std::move(m.record));

    std::vector<double> norms, sups;
    for (const auto& r : rep.per_epsilon) {
        if (r.ld_norm) norms.push_back(*r.ld_norm);
        if (r.sup_norm) sups.push_back(*r.sup_norm);
    }
    if (!norms.empty()) {
        const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
        rep.ld_norm_spread = (*hi - *lo) / *hi;
        rep.uniform_bound_ok = *rep.ld_norm_spread < 1e-3;
    }
    for (std::size_t k = 1; k < sups.size(); ++k) rep.sup_ratios.push_back(sups[k] / sups[k - 1]);

    if (cfg.d == 1 && cfg.diagnostics.degree && rep.per_epsilon.size() >= 4) {
        std::vector<VerdictEntry> entries;
        for (const auto& r : rep.per_epsilon) entries.push_back({r.epsilon, *r.degree_half, *r.limit_degree});
        try {
            rep.verdict = nonconvergence_verdict(cfg.family_id, cfg.m, entries);
        } catch (const InvalidArgument& e) {
            rep.verdict.reset();
        }
    }
    return rep;
}

int SweepReport::exit_code() const {
    if (verdict) return verdict->verdict == Verdict::Contradiction ? 0 : 2;
    if (config.d == 1 && config.diagnostics.degree) return 2;
    return uniform_bound_ok ? 0 : 2;
}

nlohmann::json to_json(const SweepReport& rep) {
    const SweepConfig& c = rep.config;
    nlohmann::json cfg = {{"family_id", c.family_id},
                          {"d", c.d},
                          {"m", c.m},
                          {"epsilons", c.epsilons},
                          {"grid_density", c.grid_density},
                          {"spiral",
                           {{"radial_step", c.radial_step},
                            {"out_offset", c.out_offset},
                            {"neck_width_factor", c.neck_width_factor},
                            {"tail_length_factor", c.tail_length_factor}}},
                          {"chordarc", {{"max_centres", c.chordarc_max_centres}}},
                          {"holder", {{"radius_factor", c.holder_radius_factor}}},
                          {"diagnostics",
                           {{"ld_norm", c.diagnostics.ld_norm},
                            {"sup_norm", c.diagnostics.sup_norm},
                            {"degree", c.diagnostics.degree},
                            {"weak_star", c.diagnostics.weak_star},
                            {"chordarc", c.diagnostics.chordarc},
                            {"holder", c.diagnostics.holder}}}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.per_epsilon) {
        nlohmann::json j = {{"epsilon", r.epsilon}, {"samples", r.samples}};
        if (r.ld_norm) j["ld_norm"] = *r.ld_norm;
        if (r.sup_norm) j["sup_norm"] = *r.sup_norm;
        if (r.degree_half) j["degree_half"] = to_json(*r.degree_half);
        if (r.degree_other_half) j["degree_other_half"] = to_json(*r.degree_other_half);
        if (r.limit_degree) j["limit_degree"] = to_json(*r.limit_degree);
        if (r.hausdorff_to_limit) j["hausdorff_to_limit"] = *r.hausdorff_to_limit;
        if (r.length) j["length"] = *r.length;
        if (r.l1_curvature) j["l1_curvature"] = *r.l1_curvature;
        if (!r.weak_star.empty()) {
            nlohmann::json ws = nlohmann::json::array();
            for (const auto& w : r.weak_star) ws.push_back(to_json(w));
            j["weak_star"] = ws;
        }
        if (r.chordarc) {
            j["bmo"] = r.chordarc->bmo;
            j["gamma"] = r.chordarc->gamma;
            j["eta"] = r.chordarc->eta;
            j["chordarc"] = to_json(*r.chordarc);
        }
        if (r.holder_pass_fraction) j["holder_pass_fraction"] = *r.holder_pass_fraction;
        if (r.holder_min_gamma) j["holder_min_gamma"] = *r.holder_min_gamma;
        rows.push_back(std::move(j));
    }
    nlohmann::json out = {{"schema_version", sweep_schema_version},
                          {"config", cfg},
                          {"per_epsilon", rows},
                          {"invariants",
                           {{"uniform_bound_ok", rep.uniform_bound_ok}, {"sup_ratios", rep.sup_ratios}}},
                          {"provenance",
                           {{"config_hash", rep.config_hash},
                            {"library_version", WINDING_VERSION},
                            {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                  std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                  std::to_string(EIGEN_MINOR_VERSION)},
                            {"json_version", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                 std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                 std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
    if (rep.ld_norm_spread) out["invariants"]["ld_norm_spread"] = *rep.ld_norm_spread;
    out["verdict"] = rep.verdict ? to_json(*rep.verdict) : nlohmann::json(nullptr);
    return out;
}

namespace {

// Uniform hash grid over a point set for nearest-neighbour queries.
class PointGrid {
public:
    explicit PointGrid(const std::vector<Eigen::Vector3d>& pts) : pts_(pts) {
        lo_ = hi_ = pts.front();
        for (const auto& p : pts) {
            lo_ = lo_.cwiseMin(p);
            hi_ = hi_.cwiseMax(p);
        }
        const double extent = std::max((hi_ - lo_).maxCoeff(), 1e-12);
        cell_ = extent / std::max(1.0, std::ceil(std::sqrt(static_cast<double>(pts.size()))));
        for (int a = 0; a < 3; ++a) {
            max_idx_[a] = static_cast<long long>(std::floor((hi_[a] - lo_[a]) / cell_));
        }
        for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(index(pts[i]))].push_back(i);
    }

    double nearest(const Eigen::Vector3d& q) const {
        const auto c = index(q);
        double best = std::numeric_limits<double>::infinity();
        // Rings closer than the occupied box are empty.
        const long long first = dist_cells(c);
        const long long last = first + max_idx_.maxCoeff() + 1;
        for (long long r = first; r <= last; ++r) {
            // Any point in ring r is at least (r - 1) * cell away.
            if (r >= 1 && static_cast<double>(r - 1) * cell_ >= best) break;
            const long long i0 = std::max(c[0] - r, 0LL), i1 = std::min(c[0] + r, max_idx_[0]);
            const long long j0 = std::max(c[1] - r, 0LL), j1 = std::min(c[1] + r, max_idx_[1]);
            const long long k0 = std::max(c[2] - r, 0LL), k1 = std::min(c[2] + r, max_idx_[2]);
            for (long long i = i0; i <= i1; ++i) {
                for (long long j = j0; j <= j1; ++j) {
                    const bool shell_ij = std::abs(i - c[0]) == r || std::abs(j - c[1]) == r;
                    for (long long k = k0; k <= k1; ++k) {
                        if (!shell_ij && std::abs(k - c[2]) != r) {
                            // Jump across the interior of the ring.
                            if (k < c[2] + r) k = std::max(k, c[2] + r - 1);
                            continue;
                        }
                        auto it = cells_.find(key({i, j, k}));
                        if (it == cells_.end()) continue;
                        for (std::size_t p : it->second) best = std::min(best, (pts_[p] - q).norm());
                    }
                }
            }
        }
        return best;
    }

private:
    using Idx = Eigen::Matrix<long long, 3, 1>;

    Idx index(const Eigen::Vector3d& p) const {
        Idx c;
        for (int a = 0; a < 3; ++a) c[a] = static_cast<long long>(std::floor((p[a] - lo_[a]) / cell_));
        return c;
    }
    long long dist_cells(const Idx& c) const {
        long long d = 0;
        for (int a = 0; a < 3; ++a) d = std::max({d, -c[a], c[a] - max_idx_[a]});
        return d;
    }
    static long long key(const Idx& c) {
        return (c[0] * 73856093LL) ^ (c[1] * 19349663LL) ^ (c[2] * 83492791LL);
    }

    const std::vector<Eigen::Vector3d>& pts_;
    Eigen::Vector3d lo_, hi_;
    double cell_ = 1.0;
    Idx max_idx_;
    std::unordered_map<long long, std::vector<std::size_t>> cells_;
};

double directed(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
    const PointGrid grid(b);
    std::vector<double> d(a.size());
    parallel_for(a.size(), [&](std::size_t i) { d[i] = grid.nearest(a[i]); });
    return *std::max_element(d.begin(), d.end());
}

std::vector<Eigen::Vector3d> lift(const std::vector<Eigen::Vector2d>& pts) {
    std::vector<Eigen::Vector3d> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = {pts[i].x(), pts[i].y(), 0.0};
    return out;
}

} // namespace

double hausdorff_distance(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
    if (a.empty() || b.empty()) throw InvalidArgument("Hausdorff distance needs two nonempty sets");
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff_distance(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b) {
    return hausdorff_distance(lift(a), lift(b));
}

SampledCurve localize(const SampledCurve& curve, double lo, double hi) {
    if (curve.size() == 0) throw InvalidArgument("cannot localise an empty curve");
    if (!(lo < hi)) throw InvalidArgument("window must satisfy lo < hi");
    const double span = curve.xs.back() - curve.xs.front();
    const double slack = 1e-12 * std::max(1.0, span);
    if (lo < curve.xs.front() - slack || hi > curve.xs.back() + slack) {
        throw InvalidArgument("window leaves the parameter range of the curve");
    }
    std::vector<double> xs;
    std::vector<Eigen::Vector2d> pts, nrm;
    std::vector<double> kappa;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve.xs[i] >= lo - slack && curve.xs[i] <= hi + slack) {
            xs.push_back(curve.xs[i]);
            pts.push_back(curve.points[i]);
            nrm.push_back(curve.normals[i]);
            kappa.push_back(curve.curvature[i]);
        }
    }
    if (xs.size() < 2) throw InvalidArgument("window holds fewer than two samples");
    return SampledCurve::from_samples(curve.params, std::move(xs), std::move(pts), std::move(nrm), std::move(kappa));
}

} // namespace winding
