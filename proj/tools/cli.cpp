#include "cli.hpp"

#include "svg.hpp"
#include "winding/chordarc.hpp"
#include "winding/curve.hpp"
#include "winding/error.hpp"
#include "winding/harness.hpp"
#include "winding/holder.hpp"
#include "winding/hyper.hpp"
#include "winding/kernel.hpp"
#include "winding/manifold.hpp"
#include "winding/report.hpp"
#include "winding/topo.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace winding::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const double nan_value = std::numeric_limits<double>::quiet_NaN();

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw Error("write failed for '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

json read_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path.string() + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON in '") + path.string() + "': " + e.what(), 0);
    }
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
    const std::string text = dump_json(j) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
}

std::string num(double v) { return format_double(v); }

// Options for one spiral: zero keeps the default derived from epsilon and m.
struct SpiralArgs {
    double radial_step = 0.0;
    double out_offset = 0.0;
    double neck_width = 0.0;
    double tail_length = 0.0;

    SpiralConfig resolve(const KernelParams& params) const {
        SpiralConfig s = SpiralConfig::defaults(params);
        if (radial_step > 0.0) {
            s.radial_step = radial_step;
            s.out_offset = 0.5 * radial_step;
        }
        if (out_offset > 0.0) s.out_offset = out_offset;
        if (neck_width > 0.0) s.neck_width = neck_width;
        if (tail_length > 0.0) s.tail_length = tail_length;
        s.validate(params);
        return s;
    }
};

json spiral_json(const SpiralConfig& s) {
    return {{"radial_step", s.radial_step},
            {"out_offset", s.out_offset},
            {"neck_width", s.neck_width},
            {"tail_length", s.tail_length}};
}

void add_spiral_options(CLI::App* sub, SpiralArgs& a) {
    sub->add_option("--radial-step", a.radial_step, "radius lost per turn (0: 10^-m/2)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out-offset", a.out_offset, "gap between arms (0: radial step/2)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--neck-width", a.neck_width, "neck window width (0: eps/10)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tail-length", a.tail_length, "tail parameter length (0: 10 eps)")
        ->check(CLI::NonNegativeNumber);
}

// ---- construct -----------------------------------------------------------

struct ConstructArgs {
    int d = 1;
    double epsilon = 0.1;
    int m = 1;
    std::string out_dir;
    std::size_t grid_density = 400;
    std::size_t nodes_per_eps = 100;
    std::size_t export_nodes = 0;
    SpiralArgs spiral;
};

std::vector<double> slice_values(const SphericalGaussField& field, const std::vector<double>& axis) {
    std::vector<double> values(axis.size() * axis.size());
    std::vector<double> x(field.dim, 0.0);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        for (std::size_t j = 0; j < axis.size(); ++j) {
            x[0] = axis[i];
            x[1] = axis[j];
            values[i * axis.size() + j] = second_form_norm(x, field);
        }
    }
    return values;
}

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
    const KernelParams params = KernelParams::make(a.epsilon, a.m);
    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    if (a.d == 1) {
        const SpiralConfig spiral = a.spiral.resolve(params);
        const SampledCurve curve = build_spiral(params, spiral, spiral_grid(params, spiral, a.grid_density));
        std::ostringstream csv;
        write_curve_csv(csv, curve);
        write_file(dir / "curve.csv", csv.str());
        std::ostringstream svg;
        write_curve_svg(svg, curve.points, "spiral eps=" + num(a.epsilon) + " m=" + std::to_string(a.m));
        write_file(dir / "curve.svg", svg.str());
        const CurveMeasures cm = curve_measures(curve);
        const json meta = {{"d", 1},
                           {"epsilon", a.epsilon},
                           {"m", a.m},
                           {"lambda", params.lambda},
                           {"grid_density", a.grid_density},
                           {"spiral", spiral_json(spiral)},
                           {"samples", curve.size()},
                           {"length", cm.length},
                           {"l1_curvature", cm.l1_curvature},
                           {"sup_curvature", cm.sup_curvature}};
        write_file(dir / "params.json", dump_json(meta) + "\n");
        out << "wrote " << (dir / "curve.csv").string() << " (" << curve.size() << " samples), "
            << (dir / "curve.svg").string() << ", " << (dir / "params.json").string() << "\n";
        return 0;
    }
    const auto field = SphericalGaussField::make(static_cast<std::size_t>(a.d), params, a.nodes_per_eps);
    const std::size_t n_export = a.export_nodes > 0 ? a.export_nodes : (a.d == 2 ? 81 : 21);
    const Grid export_grid = Grid::cube(field.dim, -2.0 * a.epsilon, 2.0 * a.epsilon, n_export);
    std::ostringstream csv;
    write_field_csv(csv, field, export_grid);
    write_file(dir / "field.csv", csv.str());
    const auto axis = export_grid.axis_nodes(0);
    std::ostringstream svg;
    write_heatmap_svg(svg, axis, axis, slice_values(field, axis),
                      "|II| on the x1-x2 slice, eps=" + num(a.epsilon) + " d=" + std::to_string(a.d));
    write_file(dir / "ii_slice.svg", svg.str());
    json summary = to_json(summarise_field(field));
    summary["nodes_per_eps"] = a.nodes_per_eps;
    summary["export_nodes"] = n_export;
    write_file(dir / "field_summary.json", dump_json(summary) + "\n");
    out << "wrote " << (dir / "field.csv").string() << " (" << export_grid.node_count() << " rows), "
        << (dir / "ii_slice.svg").string() << ", " << (dir / "field_summary.json").string() << "\n";
    return 0;
}

// ---- verify --------------------------------------------------------------

struct Identity {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
    std::string note;
};

Identity check(std::string name, double expected, double computed, double tol, bool relative) {
    Identity id{std::move(name), expected, computed, tol, relative, false, {}};
    const double dev = std::abs(computed - expected);
    const double limit = relative ? tol * std::abs(expected) : tol;
    id.pass = std::isfinite(computed) && dev <= limit;
    return id;
}

Identity failed(std::string name, double expected, double tol, bool relative, std::string note) {
    return {std::move(name), expected, nan_value, tol, relative, false, std::move(note)};
}

json to_json(const Identity& id) {
    json j = {{"name", id.name},
              {"expected", id.expected},
              {"computed", id.computed},
              {"tolerance", id.tolerance},
              {"tolerance_kind", id.relative ? "relative" : "absolute"},
              {"pass", id.pass}};
    if (!id.note.empty()) j["note"] = id.note;
    return j;
}

struct VerifyArgs {
    std::string input;
    int d = 1;
    double epsilon = 0.1;
    int m = 1;
    std::size_t grid_density = 400;
    std::size_t nodes_per_eps = 100;
    std::string out_path;
    SpiralArgs spiral;
};

void kernel_identities(const KernelParams& p, std::size_t per_eps, std::vector<Identity>& ids) {
    const double eps = p.epsilon;
    const auto j = sample_1d(Grid::line(-eps, eps, 2 * per_eps + 1),
                             [&](double x) { return mollifier_scaled(x, p); });
    ids.push_back(check("kernel_mass", 1.0, integrate(j), 1e-6, false));
    const auto k = sample_1d(Grid::line(-2.0 * eps, 2.0 * eps, 4 * per_eps + 1),
                             [&](double x) { return kernel_K(x, p); });
    ids.push_back(check("kernel_l1_norm", 2.0, quadrature(k, 1.0), 1e-6, false));
}

// Records resolution and L^d identities from one ld_norm_identity call.
void ld_identities(const SphericalGaussField& field, std::vector<Identity>& ids) {
    const double target = 4.0 * M_PI * field.params.turns();
    const double tol = field.dim <= 2 ? (field.dim == 1 ? 1e-4 : 1e-3) : 5e-3;
    const std::string name = field.dim == 1 ? "l1_curvature" : "ld_norm";
    try {
        const LdNormReport r = ld_norm_identity(field);
        ids.push_back(check("resolution", 0.0, std::abs(r.ld_norm - r.ld_norm_coarse) / r.ld_norm, 1e-3, false));
        ids.push_back(check(name, target, r.ld_norm, tol, true));
    } catch (const Error& e) {
        ids.push_back(failed("resolution", 0.0, 1e-3, false, e.what()));
        ids.push_back(failed(name, target, tol, true, "not computed: under-resolved grid"));
    }
}

void degree_identities(const SampledCurve& curve, const KernelParams& p, std::vector<Identity>& ids) {
    std::vector<double> left, right, all;
    for (double x : curve.xs) {
        const double t = angle_theta(x, p);
        if (x <= 0.0) left.push_back(t);
        if (x >= 0.0) right.push_back(t);
        all.push_back(t);
    }
    const double turns = p.turns();
    const auto record = [&](const std::string& name, const std::vector<double>& path, double expected) {
        try {
            const DegreeReport r = winding_number(path);
            Identity id = check(name, expected, r.normalised, 0.01, false);
            id.pass = id.pass && r.certified();
            ids.push_back(id);
        } catch (const Error& e) {
            ids.push_back(failed(name, expected, 0.01, false, e.what()));
        }
    };
    record("degree_negative_half", left, turns);
    record("degree_positive_half", right, -turns);
    try {
        ids.push_back(check("degree_total", 0.0, winding_number(all).normalised, 1e-6, false));
    } catch (const Error& e) {
        ids.push_back(failed("degree_total", 0.0, 1e-6, false, e.what()));
    }
}

void weak_star_identities(const KernelParams& p, std::size_t per_eps, std::vector<Identity>& ids) {
    for (const auto& phi : standard_test_functions()) {
        const WeakStarReport r = weak_star_pairing(p, phi, per_eps);
        Identity id{"weak_star_" + phi.name, r.bound, std::abs(r.pairing), 0.0, false, r.within_bound(),
                    "|pairing| <= 2 eps sup|phi'|"};
        ids.push_back(id);
    }
}

double max_curve_deviation(const SampledCurve& a, const SampledCurve& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dev = std::max({dev, std::abs(a.xs[i] - b.xs[i]), (a.points[i] - b.points[i]).cwiseAbs().maxCoeff(),
                        (a.normals[i] - b.normals[i]).cwiseAbs().maxCoeff()});
    }
    return dev;
}

int cmd_verify(VerifyArgs a, std::ostream& out, std::ostream& err) {
    std::optional<SpiralConfig> stored_spiral;
    if (!a.input.empty()) {
        const fs::path dir(a.input);
        const bool curve_dir = fs::exists(dir / "params.json");
        const json meta = read_json_file(curve_dir ? dir / "params.json" : dir / "field_summary.json");
        a.d = meta.at("d").get<int>();
        a.epsilon = meta.at("epsilon").get<double>();
        a.m = meta.at("m").get<int>();
        if (curve_dir) {
            a.grid_density = meta.at("grid_density").get<std::size_t>();
            const json& s = meta.at("spiral");
            stored_spiral = SpiralConfig{s.at("radial_step").get<double>(), s.at("out_offset").get<double>(),
                                         s.at("neck_width").get<double>(), s.at("tail_length").get<double>()};
        } else {
            a.nodes_per_eps = meta.at("nodes_per_eps").get<std::size_t>();
        }
    }
    const KernelParams params = KernelParams::make(a.epsilon, a.m);
    const std::size_t per_eps = a.d == 1 ? a.grid_density : a.nodes_per_eps;
    std::vector<Identity> ids;
    const auto field = SphericalGaussField::make(static_cast<std::size_t>(a.d), params, per_eps);
    ld_identities(field, ids);
    kernel_identities(params, std::max<std::size_t>(per_eps, 1), ids);
    const double sup_target =
        std::sqrt(static_cast<double>(a.d)) * 2.0 * M_PI * params.turns() * params.lambda / (std::exp(1.0) * a.epsilon);
    ids.push_back(check("sup_norm", sup_target, sup_second_form_norm(field), 1e-3, true));
    if (a.d == 1) {
        const SpiralConfig spiral = stored_spiral ? *stored_spiral : a.spiral.resolve(params);
        try {
            const SampledCurve curve = build_spiral(params, spiral, spiral_grid(params, spiral, a.grid_density));
            ids.push_back(check("spiral_simple", 0.0, find_self_intersection(curve.points) ? 1.0 : 0.0, 0.0, false));
            ids.push_back(check("radius_monotone", 1.0, radius_monotone(curve) ? 1.0 : 0.0, 0.0, false));
            degree_identities(curve, params, ids);
            if (!a.input.empty()) {
                std::ifstream f(fs::path(a.input) / "curve.csv");
                if (!f) throw Error("cannot open '" + (fs::path(a.input) / "curve.csv").string() + "'");
                ids.push_back(check("csv_round_trip", 0.0, max_curve_deviation(read_curve_csv(f), curve), 1e-12, false));
            }
        } catch (const GeometryError& e) {
            ids.push_back(failed("spiral_simple", 0.0, 0.0, false, e.what()));
        }
    } else {
        const FieldSummary s = summarise_field(field);
        ids.push_back(check("degree_total", 0.0, s.total_degree_integral / sphere_volume(field.dim), 1e-6, false));
    }
    weak_star_identities(params, std::max<std::size_t>(per_eps, 1), ids);

    json list = json::array();
    const Identity* first_fail = nullptr;
    for (const auto& id : ids) {
        list.push_back(to_json(id));
        if (!id.pass && !first_fail) first_fail = &id;
    }
    const json report = {{"target", {{"d", a.d}, {"epsilon", a.epsilon}, {"m", a.m}, {"samples_per_eps", per_eps}}},
                         {"identities", list},
                         {"all_pass", first_fail == nullptr},
                         {"first_failure", first_fail ? json(first_fail->name) : json(nullptr)}};
    emit_json(report, a.out_path, out);
    if (first_fail) {
        err << "identity '" << first_fail->name << "' failed: expected " << num(first_fail->expected)
            << ", computed " << num(first_fail->computed)
            << (first_fail->note.empty() ? std::string() : " (" + first_fail->note + ")") << "\n";
        return 2;
    }
    return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::string config;
    std::string out_path;
    std::string csv_dir;
    int d = 1;
    int m = 1;
    std::vector<double> epsilons;
    std::size_t grid_density = 400;
    std::string diagnostics;
};

void export_member_csv(const SweepConfig& cfg, std::size_t k, const fs::path& dir) {
    const KernelParams params = KernelParams::make(cfg.epsilons[k], cfg.m);
    std::ostringstream csv;
    if (cfg.d == 1) {
        const SpiralConfig spiral = cfg.spiral_for(params);
        write_curve_csv(csv, build_spiral(params, spiral, spiral_grid(params, spiral, cfg.grid_density)));
    } else {
        const auto field = SphericalGaussField::make(static_cast<std::size_t>(cfg.d), params, 100);
        write_field_csv(csv, field, Grid::cube(field.dim, -2.0 * params.epsilon, 2.0 * params.epsilon, 21));
    }
    write_file(dir / ("eps_" + std::to_string(k) + ".csv"), csv.str());
}

int cmd_sweep(const SweepArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    SweepConfig cfg = a.config.empty() ? SweepConfig{} : load_sweep_config(a.config);
    if (sub.count("--d")) cfg.d = a.d;
    if (sub.count("--m")) cfg.m = a.m;
    if (sub.count("--epsilons")) cfg.epsilons = a.epsilons;
    if (sub.count("--grid-density")) cfg.grid_density = a.grid_density;
    if (sub.count("--diagnostics")) {
        std::istringstream line("diagnostics = " + a.diagnostics);
        cfg.diagnostics = parse_sweep_config(line).diagnostics;
    }
    cfg.validate();
    const SweepReport rep = run_sweep(cfg);
    emit_json(to_json(rep), a.out_path, out);
    if (!a.csv_dir.empty()) {
        ensure_dir(a.csv_dir);
        for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) export_member_csv(cfg, k, a.csv_dir);
    }
    if (!a.out_path.empty()) {
        out << "epsilon, ld_norm, sup_norm, degree_half\n";
        for (const auto& r : rep.per_epsilon) {
            out << num(r.epsilon) << ", " << (r.ld_norm ? num(*r.ld_norm) : "-") << ", "
                << (r.sup_norm ? num(*r.sup_norm) : "-") << ", "
                << (r.degree_half ? std::to_string(r.degree_half->rounded) : "-") << "\n";
        }
        if (rep.verdict) out << "verdict: " << to_string(rep.verdict->verdict) << "\n";
    }
    const int code = rep.exit_code();
    if (code != 0) {
        if (rep.verdict) {
            err << "verdict " << to_string(rep.verdict->verdict) << "\n";
            for (const auto& line : rep.verdict->diagnostics) err << "  " << line << "\n";
        } else if (!rep.uniform_bound_ok) {
            err << "uniform bound violated: ld_norm spread " << num(rep.ld_norm_spread.value_or(nan_value)) << "\n";
        } else {
            err << "no verdict: the degree diagnostic needs at least four geometrically decreasing epsilons\n";
        }
    }
    return code;
}

// ---- diagnose ------------------------------------------------------------

struct DiagnoseArgs {
    std::string path;
    std::string out_path;
    std::size_t max_centres = 0;
    std::vector<double> radii;
    std::string mean_balls = "geodesic";
    bool keep_boundary_balls = false;
    double max_constant = 0.0;
};

std::string witness_text(const Witness& w) {
    std::string s = "centre " + std::to_string(w.centre);
    if (w.partner != no_partner) return s + ", partner " + std::to_string(w.partner);
    return s + ", radius " + num(w.radius);
}

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out, std::ostream& err) {
    const SampledManifold mani = read_manifold_file(a.path);
    mani.validate();
    ChordArcOptions opt;
    opt.max_centres = a.max_centres;
    opt.radii = a.radii;
    opt.mean_balls = a.mean_balls == "ambient" ? BallKind::Ambient : BallKind::Geodesic;
    opt.skip_boundary_balls = !a.keep_boundary_balls;
    const ChordArcReport rep = diagnose(mani, opt);
    const json j = to_json(rep);
    if (!a.out_path.empty()) write_file(a.out_path, dump_json(j) + "\n");
    out << "constant  value                    witness\n";
    const auto row = [&](const char* name, double v, const Witness* w) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-9s %-24s ", name, num(v).c_str());
        out << buf << (w ? witness_text(*w) : std::string("-")) << "\n";
    };
    row("bmo", rep.bmo, &rep.bmo_witness);
    row("gamma1", rep.gamma1, &rep.bmo_witness);
    row("gamma2", rep.gamma2, &rep.gamma2_witness);
    row("gamma", rep.gamma, nullptr);
    row("eta1", rep.eta1, &rep.eta1_witness);
    row("eta2", rep.eta2, &rep.eta2_witness);
    row("eta", rep.eta, nullptr);
    out << "samples " << rep.samples << ", centres " << rep.centres_tested << ", radii " << rep.radii_tested.size()
        << ", skipped balls " << rep.balls_skipped << "\n";
    if (a.out_path.empty()) out << dump_json(j) << "\n";
    if (a.max_constant > 0.0) {
        const double worst = std::max({rep.bmo, rep.gamma, rep.eta});
        if (worst > a.max_constant) {
            err << "chord-arc constant " << num(worst) << " exceeds --max-constant " << num(a.max_constant) << "\n";
            return 2;
        }
    }
    return 0;
}

// ---- holder-fit ----------------------------------------------------------

struct HolderArgs {
    std::string path;
    std::string out_path;
    double radius = 0.0;
    double min_pass = 0.0;
};

// Two-column "u,f" CSV describing a graph over a line.
std::optional<GraphFit> read_graph_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw ParseError("empty file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "u,f") return std::nullopt;
    std::vector<double> u, v;
    std::size_t no = 1;
    while (std::getline(f, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        double a = 0.0, b = 0.0;
        char tail = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf%c", &a, &b, &tail) < 2) throw ParseError("expected 'u,f'", no);
        u.push_back(a);
        v.push_back(b);
    }
    return graph_from_samples(u, v);
}

int cmd_holder(const HolderArgs& a, std::ostream& out, std::ostream& err) {
    if (auto graph = read_graph_csv(a.path)) {
        const HolderEstimate est = holder_exponent(*graph);
        emit_json(to_json(est), a.out_path, out);
        if (!a.out_path.empty()) out << "gamma_hat " << num(est.gamma_hat) << ", r2 " << num(est.r2) << "\n";
        return 0;
    }
    const SampledManifold mani = read_manifold_file(a.path);
    mani.validate();
    const double radius = a.radius > 0.0 ? a.radius : 10.0 * mani.median_edge_length();
    const SystemReport rep = graph_system_check(mani, build_net(mani, radius));
    json j = to_json(rep);
    j["radius"] = radius;
    emit_json(j, a.out_path, out);
    if (!a.out_path.empty()) {
        out << "balls " << rep.balls.size() << ", pass fraction " << num(rep.pass_fraction) << ", min gamma "
            << num(rep.min_gamma) << ", max constant " << num(rep.max_constant) << "\n";
    }
    if (rep.pass_fraction < a.min_pass) {
        err << "pass fraction " << num(rep.pass_fraction) << " below --min-pass " << num(a.min_pass) << "\n";
        return 2;
    }
    return 0;
}

// ---- constants -----------------------------------------------------------

struct ConstantsArgs {
    double delta0 = 0.0;
    double t = 1.0;
    int d = 1;
    double c2 = 1.0;
    double c3 = 1.0;
    std::size_t sweep = 0;
    std::string out_path;
};

int cmd_constants(const ConstantsArgs& a, std::ostream& out) {
    const auto entry = [&](double delta0) {
        const SemmesConstants c = semmes_constants(delta0, a.t, a.d, a.c2, a.c3);
        return json{{"delta0", delta0}, {"gamma", c.gamma}, {"c1", c.c1}};
    };
    json j = {{"t", a.t}, {"d", a.d}, {"c2", a.c2}, {"c3", a.c3}};
    if (a.sweep > 0) {
        const double limit = std::min(1.0 / (a.c2 * a.d), 0.5 * std::pow(10.0, -a.d));
        json rows = json::array();
        for (std::size_t k = 0; k < a.sweep; ++k) {
            rows.push_back(entry(0.9 * limit * static_cast<double>(k) / static_cast<double>(a.sweep)));
        }
        j["sweep"] = rows;
        j["delta0_limit"] = limit;
    } else {
        j.update(entry(a.delta0));
    }
    emit_json(j, a.out_path, out);
    return 0;
}

// ---- argument plumbing ---------------------------------------------------

const char* const subcommands[] = {"construct", "verify", "sweep", "diagnose", "holder-fit", "constants"};

bool is_subcommand(const std::string& s) {
    for (const char* c : subcommands) {
        if (s == c) return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// For every command but sweep, --config names a "key = value" file whose keys
// are long option names; entries fill options absent from the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string sub;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (is_subcommand(args[i])) {
            sub = args[i];
            break;
        }
    }
    if (sub.empty() || sub == "sweep") return args;
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw Error("cannot open config '" + path + "'");
    std::string raw;
    std::size_t no = 0;
    while (std::getline(f, raw)) {
        ++no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value' in '" + path + "'", no);
        const std::string key = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool given = false;
        for (const auto& a : args) given = given || a == key || a.rfind(key + "=", 0) == 0;
        if (!given) args.push_back(key + "=" + value);
    }
    return args;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spiral constructions, curvature identities and chord-arc diagnostics", "winding"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(WINDING_VERSION));

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a spiral curve (d = 1) or a spherical Gauss field");
    construct->add_option("--d", ca.d, "dimension of the parameter domain")->check(CLI::Range(1, 4));
    construct->add_option("--epsilon", ca.epsilon, "length scale")->check(CLI::PositiveNumber);
    construct->add_option("--m", ca.m, "turn exponent (10^m turns)")->check(CLI::Range(1, 12));
    construct->add_option("--out", ca.out_dir, "output directory")->required();
    construct->add_option("--grid-density", ca.grid_density, "curve samples per epsilon")->check(CLI::Range(1, 1000000));
    construct->add_option("--nodes-per-eps", ca.nodes_per_eps, "field cells per epsilon (d >= 2)")
        ->check(CLI::Range(1, 100000));
    construct->add_option("--export-nodes", ca.export_nodes, "field CSV nodes per axis (0: 81 for d = 2, else 21)");
    add_spiral_options(construct, ca.spiral);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check the curvature, degree and kernel identities");
    verify->add_option("--input", va.input, "directory written by construct");
    verify->add_option("--d", va.d, "dimension")->check(CLI::Range(1, 4));
    verify->add_option("--epsilon", va.epsilon, "length scale")->check(CLI::PositiveNumber);
    verify->add_option("--m", va.m, "turn exponent")->check(CLI::Range(1, 12));
    verify->add_option("--grid-density", va.grid_density, "samples per epsilon (d = 1)")->check(CLI::Range(1, 1000000));
    verify->add_option("--nodes-per-eps", va.nodes_per_eps, "cells per epsilon (d >= 2)")->check(CLI::Range(1, 100000));
    verify->add_option("--out", va.out_path, "JSON output file (default: standard output)");
    add_spiral_options(verify, va.spiral);

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "run an epsilon ladder and the non-convergence verdict");
    sweep->add_option("--config", sa.config, "sweep config file (key = value lines)");
    sweep->add_option("--out", sa.out_path, "JSON report file (default: standard output)");
    sweep->add_option("--csv-dir", sa.csv_dir, "directory for per-epsilon CSV exports");
    sweep->add_option("--d", sa.d, "dimension")->check(CLI::Range(1, 4));
    sweep->add_option("--m", sa.m, "turn exponent")->check(CLI::Range(1, 12));
    sweep->add_option("--epsilons", sa.epsilons, "comma-separated, strictly decreasing")->delimiter(',');
    sweep->add_option("--grid-density", sa.grid_density, "samples per epsilon");
    sweep->add_option("--diagnostics", sa.diagnostics, "comma list of ld_norm,sup_norm,degree,weak_star,chordarc,holder or none");

    DiagnoseArgs da;
    auto* diag = app.add_subcommand("diagnose", "chord-arc constants of a curve CSV or triangle mesh");
    diag->add_option("path", da.path, "curve CSV or mesh text file")->required();
    diag->add_option("--out", da.out_path, "JSON report file");
    diag->add_option("--max-centres", da.max_centres, "cap on curve centres (0: all)");
    diag->add_option("--radii", da.radii, "comma-separated radii (default: doubling ladder)")->delimiter(',');
    diag->add_option("--mean-balls", da.mean_balls, "ball type for BMO and gamma2")
        ->check(CLI::IsMember({"geodesic", "ambient"}));
    diag->add_flag("--keep-boundary-balls", da.keep_boundary_balls, "evaluate eta1 on balls reaching the boundary");
    diag->add_option("--max-constant", da.max_constant, "exit 2 when any constant exceeds this (0: off)")
        ->check(CLI::NonNegativeNumber);

    HolderArgs ha;
    auto* holder = app.add_subcommand("holder-fit", "Holder graph check over a net, or one graph from a u,f CSV");
    holder->add_option("path", ha.path, "curve CSV, mesh text file or u,f CSV")->required();
    holder->add_option("--out", ha.out_path, "JSON report file");
    holder->add_option("--radius", ha.radius, "net radius (0: 10 median edges)")->check(CLI::NonNegativeNumber);
    holder->add_option("--min-pass", ha.min_pass, "exit 2 below this pass fraction")->check(CLI::Range(0.0, 1.0));

    ConstantsArgs ka;
    auto* constants = app.add_subcommand("constants", "gamma and C1 from delta0");
    constants->add_option("--delta0", ka.delta0, "flatness parameter")->check(CLI::NonNegativeNumber);
    constants->add_option("--t", ka.t, "scale ratio")->check(CLI::PositiveNumber);
    constants->add_option("--d", ka.d, "dimension")->check(CLI::Range(1, 16));
    constants->add_option("--c2", ka.c2, "exponent constant")->check(CLI::PositiveNumber);
    constants->add_option("--c3", ka.c3, "multiplicative constant")->check(CLI::PositiveNumber);
    constants->add_option("--sweep", ka.sweep, "tabulate this many delta0 values up to 0.9 of the admissible limit");
    constants->add_option("--out", ka.out_path, "JSON output file");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(std::move(args));
        std::vector<const char*> ptrs;
        for (const auto& s : args) ptrs.push_back(s.c_str());
        try {
            app.parse(static_cast<int>(ptrs.size()), ptrs.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? 0 : 1;
        }
        if (construct->parsed()) return cmd_construct(ca, out);
        if (verify->parsed()) return cmd_verify(va, out, err);
        if (sweep->parsed()) return cmd_sweep(sa, *sweep, out, err);
        if (diag->parsed()) return cmd_diagnose(da, out, err);
        if (holder->parsed()) return cmd_holder(ha, out, err);
        if (constants->parsed()) return cmd_constants(ka, out);
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace winding::cli
