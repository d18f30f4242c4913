// Python bindings for the main operations.  JSON-shaped arguments cross
// the boundary as serialized strings; the python package wraps them with
// dict-friendly helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "hsurf/acceptance.hpp"
#include "hsurf/curvature_field.hpp"
#include "hsurf/error.hpp"
#include "hsurf/experiment.hpp"
#include "hsurf/flat_curve.hpp"
#include "hsurf/geodesic.hpp"
#include "hsurf/graph_solver.hpp"
#include "hsurf/rotational.hpp"
#include "hsurf/stability.hpp"

namespace py = pybind11;
using namespace hsurf;
using nlohmann::json;

namespace {

Vec3 to_vec3(const std::vector<double>& v) {
    if (v.size() != 3) throw ConfigError("expected a 3-vector");
    return Vec3(v[0], v[1], v[2]);
}

std::vector<double> from_vec3(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

std::string certificate_name(Certificate c) {
    switch (c) {
        case Certificate::Stable: return "stable";
        case Certificate::Unstable: return "unstable";
        case Certificate::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

py::dict flat_curve_py(const CurvatureField& field, double theta0, double s_max,
                       double step, const std::vector<double>& e1,
                       const std::vector<double>& e2) {
    FlatCurveOptions opts;
    opts.theta0 = theta0;
    opts.s_max = s_max;
    opts.step = step;
    const auto sol =
        integrate_flat_curve(field, to_vec3(e1).normalized(), to_vec3(e2).normalized(), opts);
    const auto closure = detect_closure(sol, field);
    py::dict out;
    out["closed"] = closure.closed;
    out["gap"] = closure.gap;
    out["closure_integral_norm"] = closure.integral_norm;
    out["criteria_agree"] = closure.criteria_agree;
    out["straight_line"] = sol.straight_line;
    if (sol.period) out["period"] = *sol.period;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(sol.points.size());
    for (const auto& p : sol.points) pts.emplace_back(p.x(), p.y());
    out["points"] = pts;
    out["theta"] = sol.theta;
    out["s"] = sol.s;
    return out;
}

py::dict solve_graph_py(const CurvatureField& field, const std::string& domain_json) {
    const GridDomain dom = GridDomain::from_json(json::parse(domain_json));
    const GraphSolution sol = solve_dirichlet(field, dom);
    py::dict out;
    out["converged"] = sol.converged;
    out["status"] = sol.status;
    out["residual"] = sol.residual_norm;
    out["iterations"] = sol.newton_iterations;
    out["max_height"] = sol.max_abs_height();
    return out;
}

py::dict rotational_py(const std::vector<double>& coeffs, const std::string& shape,
                       int rows, int cols, double step) {
    RotationalOptions opts;
    opts.ring_rows = rows;
    opts.cols = cols;
    opts.step = step;
    const ZonalProfile zon = ZonalProfile::polynomial(coeffs);
    const RotationalBuild build =
        shape == "hemisphere" ? build_hemisphere(zon, opts) : build_sphere(zon, opts);
    py::dict out;
    out["pole_to_pole"] = build.profile.ends_at_pole;
    out["pole_closure_error"] = build.pole_closure_error;
    out["curvature_residual"] = build.curvature_residual;
    out["mirror_asymmetry"] = build.mirror_asymmetry;
    out["strictly_convex"] = build.strictly_convex;
    out["gauss_map_monotone"] = build.gauss_map_monotone;
    out["vertex_count"] = build.surface.vertex_count();
    out["area"] = build.surface.total_area();
    if (shape == "hemisphere") {
        out["boundary_radius"] = build.boundary_radius;
        out["comparison_radius"] = build.comparison_radius;
        out["intrinsic_radius"] = intrinsic_radius(build.surface);
    } else {
        out["flux_axis"] = flux_integral(build.surface, zonal_field(zon), Vec3::UnitZ());
    }
    return out;
}

py::dict stability_report_py(const CurvatureField& field, const std::string& surface_json,
                             int estrella_resolution) {
    const DiscreteSurface surf = surface_from_json(json::parse(surface_json), field);
    const StabilityReport rep = stability_report(surf, field, estrella_resolution);
    py::dict out;
    out["lambda0"] = rep.lambda0;
    out["eigen_status"] = rep.eigen_status;
    out["jacobi_residuals"] = std::vector<double>{
        rep.jacobi_residuals[0], rep.jacobi_residuals[1], rep.jacobi_residuals[2]};
    out["estrella_c"] = rep.estrella_c;
    out["radius_bound"] = rep.radius_bound;
    if (std::isfinite(rep.intrinsic_radius)) out["intrinsic_radius"] = rep.intrinsic_radius;
    if (std::isfinite(rep.desiq_margin)) out["desiq_margin"] = rep.desiq_margin;
    out["certificate"] = certificate_name(rep.certificate);
    out["certificate_witness"] = rep.certificate_witness;
    return out;
}

std::string run_command_py(const std::string& command, const std::string& config_json,
                           const std::string& out_dir, bool quick, std::uint64_t seed) {
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.quick = quick;
    opts.seed = seed;
    const auto config = ExperimentConfig::parse(command, json::parse(config_json));
    return run_command(config, opts).dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "surfaces of prescribed mean curvature: solvers and diagnostics";

    // Base first: translators run newest-first, so the ConfigError one
    // must be registered after the catch-all.
    py::register_exception<Error>(m, "HsurfError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "HsurfConfigError", PyExc_ValueError);

    py::class_<CurvatureField>(m, "Field")
        .def_static("constant", &CurvatureField::constant, py::arg("h0"))
        .def_static(
            "linear",
            [](double a, double b, const std::vector<double>& axis) {
                return CurvatureField::linear(a, b, to_vec3(axis));
            },
            py::arg("a"), py::arg("b"), py::arg("axis"))
        .def_static(
            "zonal",
            [](const std::vector<double>& coeffs, const std::vector<double>& axis) {
                return CurvatureField::zonal(coeffs, to_vec3(axis));
            },
            py::arg("coeffs"), py::arg("axis"))
        .def_static(
            "from_json",
            [](const std::string& spec) {
                return CurvatureField::from_json(json::parse(spec));
            },
            py::arg("spec_json"))
        .def("__call__",
             [](const CurvatureField& f, const std::vector<double>& x) {
                 return f.eval(to_vec3(x));
             })
        .def("eval",
             [](const CurvatureField& f, const std::vector<double>& x) {
                 return f.eval(to_vec3(x));
             })
        .def("gradient",
             [](const CurvatureField& f, const std::vector<double>& x) {
                 return from_vec3(f.gradient(to_vec3(x)));
             })
        .def("laplacian",
             [](const CurvatureField& f, const std::vector<double>& x) {
                 return f.laplacian(to_vec3(x));
             })
        .def("estrella_value",
             [](const CurvatureField& f, const std::vector<double>& x) {
                 return estrella_value(f, to_vec3(x));
             })
        .def_property_readonly("analytic_derivatives",
                               &CurvatureField::has_analytic_derivatives);

    m.def(
        "estrella_minimum",
        [](const CurvatureField& field, int resolution) {
            const auto rep = estrella_constant(field, resolution);
            py::dict out;
            out["c"] = rep.min_value;
            out["argmin"] = from_vec3(rep.argmin);
            out["certified_positive"] = rep.min_value > 0;
            if (rep.min_value > 0)
                out["radius_bound"] = 2.0 * kPi / std::sqrt(3.0 * rep.min_value);
            return out;
        },
        py::arg("field"), py::arg("resolution") = 2000);

    m.def(
        "closure_integral",
        [](const CurvatureField& field, const std::vector<double>& e1,
           const std::vector<double>& e2) {
            const Vec2 v = closure_integral(field, to_vec3(e1).normalized(),
                                            to_vec3(e2).normalized());
            return std::vector<double>{v.x(), v.y()};
        },
        py::arg("field"), py::arg("e1") = std::vector<double>{1, 0, 0},
        py::arg("e2") = std::vector<double>{0, 1, 0});

    m.def("flat_curve", &flat_curve_py, py::arg("field"), py::arg("theta0") = 0.0,
          py::arg("s_max") = 4 * kPi, py::arg("step") = 1e-3,
          py::arg("e1") = std::vector<double>{1, 0, 0},
          py::arg("e2") = std::vector<double>{0, 1, 0});

    m.def("solve_graph", &solve_graph_py, py::arg("field"), py::arg("domain_json"));

    m.def("rotational", &rotational_py, py::arg("coeffs"), py::arg("shape") = "sphere",
          py::arg("rows") = 96, py::arg("cols") = 96, py::arg("step") = 1e-3);

    m.def("stability_report", &stability_report_py, py::arg("field"),
          py::arg("surface_json"), py::arg("estrella_resolution") = 1000);

    m.def("run_command", &run_command_py, py::arg("command"), py::arg("config_json"),
          py::arg("out_dir") = ".", py::arg("quick") = false, py::arg("seed") = 0);

    m.def("command_names", [] { return command_names(); });

    m.def(
        "run_acceptance",
        [](bool quick, std::uint64_t seed) {
            AcceptanceOptions opts;
            opts.quick = quick;
            if (seed) opts.seed = seed;
            py::list out;
            for (const auto& r : run_acceptance(opts)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["runtime_seconds"] = r.runtime_seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("quick") = true, py::arg("seed") = 0);
}
