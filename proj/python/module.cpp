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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace winding;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array map_values(const Array& x, const std::function<double(double)>& f) {
    Array out(x.request().shape);
    const double* in = x.data();
    double* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < x.size(); ++i) dst[i] = f(in[i]);
    return out;
}

Eigen::MatrixXd stack(const std::vector<Eigen::Vector2d>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return m;
}

SphericalGaussField field(std::size_t d, double epsilon, int m, std::size_t nodes_per_eps) {
    return SphericalGaussField::make(d, KernelParams::make(epsilon, m), nodes_per_eps);
}

std::vector<double> point(const std::vector<double>& x, std::size_t d) {
    if (x.size() != d) throw InvalidArgument("point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(d));
    return x;
}

SampledManifold mesh_from_arrays(const Eigen::MatrixXd& vertices, const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& faces) {
    if (vertices.cols() != 3) throw InvalidArgument("vertices must have shape (n, 3)");
    if (faces.cols() != 3) throw InvalidArgument("faces must have shape (m, 3)");
    std::vector<Eigen::Vector3d> v(static_cast<std::size_t>(vertices.rows()));
    for (Eigen::Index i = 0; i < vertices.rows(); ++i) v[static_cast<std::size_t>(i)] = vertices.row(i).transpose();
    std::vector<std::array<std::size_t, 3>> f(static_cast<std::size_t>(faces.rows()));
    for (Eigen::Index i = 0; i < faces.rows(); ++i) {
        for (int k = 0; k < 3; ++k) {
            if (faces(i, k) < 0 || faces(i, k) >= vertices.rows()) throw InvalidArgument("face index out of range in row " + std::to_string(i));
            f[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = static_cast<std::size_t>(faces(i, k));
        }
    }
    return manifold_from_mesh(v, f);
}

std::string diagnose_json(const SampledManifold& m, std::size_t max_centres) {
    ChordArcOptions opt;
    opt.max_centres = max_centres;
    ChordArcReport r;
    {
        py::gil_scoped_release release;
        r = diagnose(m, opt);
    }
    return dump_json(to_json(r));
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Native core of the winding toolkit; the winding package wraps it.";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> base;
    base.call_once_and_store_result([&]() { return py::exception<Error>(mod, "WindingError", PyExc_RuntimeError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument& e) {
            py::set_error(PyExc_ValueError, e.what());
        } catch (const ParseError& e) {
            py::set_error(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            py::set_error(base.get_stored(), e.what());
        }
    });

    mod.attr("version") = WINDING_VERSION;
    mod.def("mollifier_normalisation", &mollifier_normalisation);

    mod.def(
        "kernel",
        [](const Array& x, double epsilon, int m) {
            const auto p = KernelParams::make(epsilon, m);
            return map_values(x, [&](double v) { return kernel_K(v, p); });
        },
        py::arg("x"), py::arg("epsilon"), py::arg("m") = 1);
    mod.def(
        "mollifier",
        [](const Array& x, double epsilon, int m) {
            const auto p = KernelParams::make(epsilon, m);
            return map_values(x, [&](double v) { return mollifier_scaled(v, p); });
        },
        py::arg("x"), py::arg("epsilon"), py::arg("m") = 1);
    mod.def(
        "angle",
        [](const Array& x, double epsilon, int m) {
            const auto p = KernelParams::make(epsilon, m);
            return map_values(x, [&](double v) { return angle_theta(v, p); });
        },
        py::arg("x"), py::arg("epsilon"), py::arg("m") = 1);

    mod.def(
        "spiral",
        [](double epsilon, int m, std::size_t density) {
            const auto p = KernelParams::make(epsilon, m);
            const auto cfg = SpiralConfig::defaults(p);
            const auto c = build_spiral(p, cfg, spiral_grid(p, cfg, density));
            const auto meas = curve_measures(c);
            py::dict out;
            out["xs"] = c.xs;
            out["points"] = stack(c.points);
            out["normals"] = stack(c.normals);
            out["curvature"] = c.curvature;
            out["arc_weights"] = c.arc_weights;
            out["length"] = meas.length;
            out["l1_curvature"] = meas.l1_curvature;
            out["sup_curvature"] = meas.sup_curvature;
            out["simple"] = !find_self_intersection(c.points).has_value();
            out["radius_monotone"] = radius_monotone(c);
            return out;
        },
        py::arg("epsilon"), py::arg("m") = 1, py::arg("density") = 400);

    mod.def(
        "ld_norm_json",
        [](std::size_t d, double epsilon, int m, std::size_t nodes_per_eps) {
            return dump_json(to_json(ld_norm_identity(field(d, epsilon, m, nodes_per_eps))));
        },
        py::arg("d"), py::arg("epsilon"), py::arg("m") = 1, py::arg("nodes_per_eps") = 100);
    mod.def(
        "sup_norm",
        [](std::size_t d, double epsilon, int m, std::size_t nodes_per_eps) {
            return sup_second_form_norm(field(d, epsilon, m, nodes_per_eps));
        },
        py::arg("d"), py::arg("epsilon"), py::arg("m") = 1, py::arg("nodes_per_eps") = 100);
    mod.def(
        "gauss_map",
        [](const std::vector<double>& x, double epsilon, int m) {
            const auto f = field(x.size(), epsilon, m, 20);
            return Eigen::VectorXd(gauss_map_nd(point(x, f.dim), f));
        },
        py::arg("x"), py::arg("epsilon"), py::arg("m") = 1);
    mod.def(
        "jacobian",
        [](const std::vector<double>& x, double epsilon, int m) {
            const auto f = field(x.size(), epsilon, m, 20);
            return Eigen::MatrixXd(jacobian_rows(point(x, f.dim), f));
        },
        py::arg("x"), py::arg("epsilon"), py::arg("m") = 1);

    mod.def(
        "winding_number_json", [](const std::vector<double>& thetas) { return dump_json(to_json(winding_number(thetas))); },
        py::arg("thetas"));
    mod.def(
        "weak_star_json",
        [](double epsilon, int m) {
            nlohmann::json out = nlohmann::json::array();
            const auto p = KernelParams::make(epsilon, m);
            for (const auto& phi : standard_test_functions()) out.push_back(to_json(weak_star_pairing(p, phi)));
            return dump_json(out);
        },
        py::arg("epsilon"), py::arg("m") = 1);

    mod.def(
        "sweep_json",
        [](const std::string& config_text) {
            std::istringstream in(config_text);
            const auto cfg = parse_sweep_config(in);
            SweepReport rep;
            {
                py::gil_scoped_release release;
                rep = run_sweep(cfg);
            }
            return py::make_tuple(dump_json(to_json(rep)), rep.exit_code());
        },
        py::arg("config_text") = "");

    mod.def(
        "diagnose_mesh_json",
        [](const Eigen::MatrixXd& vertices, const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& faces,
           std::size_t max_centres) { return diagnose_json(mesh_from_arrays(vertices, faces), max_centres); },
        py::arg("vertices"), py::arg("faces"), py::arg("max_centres") = 0);
    mod.def(
        "diagnose_icosphere_json",
        [](std::size_t subdivisions, std::size_t max_centres) {
            return diagnose_json(make_icosphere(subdivisions), max_centres);
        },
        py::arg("subdivisions"), py::arg("max_centres") = 0);
    mod.def(
        "diagnose_circle_json",
        [](std::size_t n, std::size_t max_centres) { return diagnose_json(make_circle(n), max_centres); },
        py::arg("n"), py::arg("max_centres") = 0);

    mod.def(
        "holder_fit_json",
        [](const std::vector<double>& u, const std::vector<double>& f) {
            return dump_json(to_json(holder_exponent(graph_from_samples(u, f))));
        },
        py::arg("u"), py::arg("f"));

    mod.def(
        "semmes_constants",
        [](double delta0, double t, int d, double c2, double c3) {
            const auto c = semmes_constants(delta0, t, d, c2, c3);
            return py::make_tuple(c.gamma, c.c1);
        },
        py::arg("delta0"), py::arg("t"), py::arg("d"), py::arg("c2"), py::arg("c3"));
}
