#include "hsurf/experiment.hpp"

#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "hsurf/acceptance.hpp"
#include "hsurf/error.hpp"
#include "hsurf/flat_curve.hpp"
#include "hsurf/geodesic.hpp"
#include "hsurf/graph_solver.hpp"
#include "hsurf/io.hpp"
#include "hsurf/rotational.hpp"
#include "hsurf/stability.hpp"

namespace hsurf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

Vec3 vec3_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(where + " must be a 3-vector");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

std::string path_in(const RunOptions& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

CurvatureField field_of(const json& params) {
    if (!params.contains("field"))
        throw ConfigError("config requires a 'field' entry");
    return CurvatureField::from_json(params.at("field"));
}

ZonalProfile zonal_of(const json& spec) {
    require_keys(spec, {"coeffs"}, "zonal spec");
    return ZonalProfile::polynomial(spec.at("coeffs").get<std::vector<double>>());
}

std::string certificate_name(Certificate c) {
    switch (c) {
        case Certificate::Stable: return "stable";
        case Certificate::Unstable: return "unstable";
        case Certificate::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

// ------------------------------------------------------------------
// Subcommands
// ------------------------------------------------------------------

json run_flat_curve(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "plane", "theta0", "s_max", "step"}, "flat-curve config");
    const CurvatureField field = field_of(params);
    Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY();
    if (params.contains("plane")) {
        require_keys(params.at("plane"), {"e1", "e2"}, "plane");
        e1 = vec3_of(params["plane"]["e1"], "plane.e1").normalized();
        e2 = vec3_of(params["plane"]["e2"], "plane.e2");
        e2 = (e2 - e2.dot(e1) * e1).normalized();
    }
    FlatCurveOptions fo;
    fo.theta0 = params.value("theta0", 0.0);
    fo.s_max = params.value("s_max", 4.0 * kPi);
    fo.step = params.value("step", opts.quick ? 5e-3 : 1e-3);

    const auto sol = integrate_flat_curve(field, e1, e2, fo);
    const auto closure = detect_closure(sol, field);

    write_curve_csv(path_in(opts, "curve.csv"), sol);
    write_svg_polyline(path_in(opts, "curve.svg"), sol.points);

    json summary;
    summary["closed"] = closure.closed;
    summary["gap"] = closure.gap;
    summary["closure_integral_norm"] = closure.integral_norm;
    summary["criteria_agree"] = closure.criteria_agree;
    summary["straight_line"] = sol.straight_line;
    if (sol.period) summary["period"] = *sol.period;
    write_json_file(path_in(opts, "flat_curve.json"), summary);
    return summary;
}

json run_solve_graph(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "domain", "soliton_offset"}, "solve-graph config");
    const CurvatureField field = field_of(params);
    const GridDomain domain = GridDomain::from_json(params.at("domain"));
    const GraphSolution sol = solve_dirichlet(field, domain);
    const DiscreteSurface surf = DiscreteSurface::from_graph(sol);

    write_obj(path_in(opts, "mesh.obj"), surf);
    std::vector<std::vector<double>> rows;
    for (const auto& [i, j] : domain.interior_nodes()) {
        const Vec2 p = domain.position(i, j);
        const auto c = sol.curvatures(i, j);
        rows.push_back({p.x(), p.y(), sol.value(i, j), c.h, c.k, c.sigma2});
    }
    write_csv(path_in(opts, "solution.csv"), {"x", "y", "u", "H", "K", "sigma2"}, rows);

    json summary;
    summary["converged"] = sol.converged;
    summary["status"] = sol.status;
    summary["residual"] = sol.residual_norm;
    summary["iterations"] = sol.newton_iterations;
    summary["max_height"] = sol.max_abs_height();
    if (params.contains("soliton_offset")) {
        const auto res = soliton_residual(sol, params["soliton_offset"].get<double>());
        summary["soliton_residual"] = res.max_abs;
    }
    write_json_file(path_in(opts, "solve_graph.json"), summary);
    if (!sol.converged) throw Error("graph solve stalled (see solve_graph.json)");
    return summary;
}

json run_rotational(const json& params, const RunOptions& opts) {
    require_keys(params, {"zonal", "shape", "rows", "cols", "step"}, "rotational config");
    const ZonalProfile zonal = zonal_of(params.at("zonal"));
    const std::string shape = params.value("shape", "sphere");
    RotationalOptions ro;
    ro.ring_rows = params.value("rows", opts.resolution > 0 ? opts.resolution
                                        : opts.quick      ? 48
                                                          : 128);
    ro.cols = params.value("cols", ro.ring_rows);
    ro.step = params.value("step", opts.quick ? 4e-3 : 1e-3);

    const RotationalBuild build =
        shape == "hemisphere" ? build_hemisphere(zonal, ro) : build_sphere(zonal, ro);

    write_profile_csv(path_in(opts, "profile.csv"), build.profile);
    write_obj(path_in(opts, "mesh.obj"), build.surface);

    json summary;
    summary["shape"] = shape;
    summary["pole_to_pole"] = build.profile.ends_at_pole;
    summary["pole_closure_error"] = build.pole_closure_error;
    summary["curvature_residual"] = build.curvature_residual;
    summary["mirror_asymmetry"] = build.mirror_asymmetry;
    summary["strictly_convex"] = build.strictly_convex;
    summary["gauss_map_monotone"] = build.gauss_map_monotone;
    if (shape == "hemisphere") {
        summary["boundary_radius"] = build.boundary_radius;
        summary["comparison_radius"] = build.comparison_radius;
    }
    write_json_file(path_in(opts, "rotational.json"), summary);
    return summary;
}

json run_stability_report(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "surface", "estrella_resolution"},
                 "stability-report config");
    const CurvatureField field = field_of(params);
    const DiscreteSurface surf = surface_from_json(params.at("surface"), field);

    const int est_res =
        params.value("estrella_resolution", opts.quick ? 500 : 2000);
    const StabilityReport rep = stability_report(surf, field, est_res);

    const StabilityOperator op = assemble_stability_operator(surf, field);
    write_matrix_triplets(path_in(opts, "operator.txt"), op.matrix);
    write_obj(path_in(opts, "mesh.obj"), surf);
    std::map<std::string, std::vector<double>> fields;
    std::vector<double> hvals, kvals, s2(surf.vertex_count());
    for (int v = 0; v < surf.vertex_count(); ++v) {
        hvals.push_back(surf.mean_curvature(v));
        kvals.push_back(surf.gauss_curvature(v));
        s2[v] = surf.sigma2(v);
    }
    fields["H"] = hvals;
    fields["K"] = kvals;
    fields["sigma2"] = s2;
    fields["Q"] = q_transform(op, field);
    write_vertex_fields_csv(path_in(opts, "fields.csv"), surf, fields);

    json summary;
    summary["lambda0"] = rep.lambda0;
    summary["eigen_status"] = rep.eigen_status;
    summary["eigenfunction_sign_definite"] = rep.eigenfunction_sign_definite;
    summary["jacobi_residuals"] = {rep.jacobi_residuals[0], rep.jacobi_residuals[1],
                                   rep.jacobi_residuals[2]};
    summary["estrella_c"] = rep.estrella_c;
    summary["radius_bound"] = rep.radius_bound;
    if (std::isfinite(rep.intrinsic_radius))
        summary["intrinsic_radius"] = rep.intrinsic_radius;
    if (std::isfinite(rep.desiq_margin)) summary["desiq_margin"] = rep.desiq_margin;
    summary["certificate"] = certificate_name(rep.certificate);
    summary["certificate_witness"] = rep.certificate_witness;
    write_json_file(path_in(opts, "stability_report.json"), summary);
    return summary;
}

json run_estrella(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "resolution"}, "estrella config");
    const CurvatureField field = field_of(params);
    const int res = params.contains("resolution") ? params["resolution"].get<int>()
                    : opts.resolution > 0         ? opts.resolution
                    : opts.quick                  ? 500
                                                  : 4000;
    const EstrellaReport rep = estrella_constant(field, res);

    std::vector<std::vector<double>> rows;
    const auto pts = fibonacci_sphere(res);
    for (size_t k = 0; k < pts.size(); ++k)
        rows.push_back({pts[k].x(), pts[k].y(), pts[k].z(), rep.values[k]});
    write_csv(path_in(opts, "estrella_samples.csv"), {"x", "y", "z", "value"}, rows);

    json summary;
    summary["c"] = rep.min_value;
    summary["argmin"] = {rep.argmin.x(), rep.argmin.y(), rep.argmin.z()};
    summary["resolution"] = rep.grid_resolution;
    summary["certified_positive"] = rep.min_value > 0;
    if (rep.min_value > 0)
        summary["radius_bound"] = 2.0 * kPi / std::sqrt(3.0 * rep.min_value);
    write_json_file(path_in(opts, "estrella.json"), summary);
    return summary;
}

json run_height_sweep(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "radii", "spacing", "saturation_tol"},
                 "height-sweep config");
    const CurvatureField field = field_of(params);
    const auto radii = params.at("radii").get<std::vector<double>>();
    const double spacing = params.value("spacing", opts.quick ? 1.0 / 32 : 1.0 / 96);
    const double sat = params.value("saturation_tol", 1e-4);

    const HeightExperiment exp = height_experiment(field, radii, spacing, sat);

    std::vector<std::vector<double>> rows;
    for (const auto& e : exp.entries)
        rows.push_back({e.domain_size, e.max_height, e.converged ? 1.0 : 0.0});
    write_csv(path_in(opts, "heights.csv"), {"radius", "max_height", "converged"}, rows);

    json summary;
    summary["supremum"] = exp.supremum;
    summary["saturated"] = exp.saturated;
    summary["last_increment"] = exp.last_increment;
    summary["item5_holds"] = exp.item5_holds;
    summary["item5_margin"] = exp.item5_margin;
    json entries = json::array();
    for (const auto& e : exp.entries)
        entries.push_back({{"radius", e.domain_size},
                           {"max_height", e.max_height},
                           {"converged", e.converged},
                           {"status", e.status}});
    summary["entries"] = entries;
    write_json_file(path_in(opts, "height_sweep.json"), summary);
    return summary;
}

json run_radius_sweep(const json& params, const RunOptions& opts) {
    require_keys(params, {"suite"}, "radius-sweep config");
    json suite = params.value("suite", json::array());
    if (suite.empty()) {
        // Built-in family: hemispheres and solved caps with fields whose
        // estrella constant is positive.
        suite = json::array();
        for (auto coeffs : std::vector<std::vector<double>>{
                 {1.0}, {1.0, 0.0, 0.25}, {1.2, 0.3}, {1.0, 0.0, 1.0}, {1.5, -0.25}})
            suite.push_back({{"kind", "hemisphere"}, {"coeffs", coeffs}});
        for (double r : {0.4, 0.6, 0.75})
            suite.push_back({{"kind", "cap"}, {"radius", r}});
    }

    json entries = json::array();
    std::vector<std::vector<double>> rows;
    bool all_pass = true;
    for (const auto& item : suite) {
        CurvatureField field = CurvatureField::constant(1.0);
        DiscreteSurface surf = DiscreteSurface::flat_disk(1.0, 0.25);
        double h_mesh = 0.0;
        const std::string kind = item.at("kind").get<std::string>();
        json spec = item;
        if (kind == "hemisphere" || kind == "rotational-sphere") {
            field = zonal_field(zonal_of(json{{"coeffs", item.at("coeffs")}}));
            spec["rows"] = item.value("rows", opts.quick ? 48 : 128);
            spec["cols"] = item.value("cols", opts.quick ? 48 : 128);
        } else if (kind == "cap") {
            spec["spacing"] = item.value("spacing", opts.quick ? 1.0 / 24 : 1.0 / 64);
        }
        surf = surface_from_json(spec, field);
        h_mesh = kind == "cap" ? spec["spacing"].get<double>()
                               : kPi / spec["rows"].get<double>();

        const EstrellaReport est = estrella_constant(field, opts.quick ? 500 : 2000);
        json entry;
        entry["kind"] = kind;
        entry["estrella_c"] = est.min_value;
        if (est.min_value > 0) {
            const RadiusReport rep = radius_check(surf, est.min_value);
            entry["intrinsic_radius"] = rep.intrinsic_radius;
            entry["bound"] = rep.bound;
            const bool pass = rep.intrinsic_radius <= rep.bound + 2.0 * h_mesh;
            entry["pass"] = pass;
            all_pass = all_pass && pass;
            rows.push_back({est.min_value, rep.intrinsic_radius, rep.bound,
                            pass ? 1.0 : 0.0});
        } else {
            entry["pass"] = false;
            entry["note"] = "estrella constant not positive";
            all_pass = false;
        }
        entries.push_back(entry);
    }

    write_csv(path_in(opts, "radius_sweep.csv"),
              {"estrella_c", "intrinsic_radius", "bound", "pass"}, rows);
    json summary;
    summary["entries"] = entries;
    summary["all_pass"] = all_pass;
    write_json_file(path_in(opts, "radius_sweep.json"), summary);
    return summary;
}

json run_flux(const json& params, const RunOptions& opts) {
    require_keys(params, {"field", "surface", "direction"}, "flux config");
    const CurvatureField field = field_of(params);
    const DiscreteSurface surf = surface_from_json(params.at("surface"), field);
    const Vec3 v = params.contains("direction")
                       ? vec3_of(params.at("direction"), "direction").normalized()
                       : Vec3::UnitZ();
    json summary;
    summary["flux"] = flux_integral(surf, field, v);
    summary["area"] = surf.total_area();
    summary["direction"] = {v.x(), v.y(), v.z()};
    write_json_file(path_in(opts, "flux.json"), summary);
    return summary;
}

json run_reproduce(const json& params, const RunOptions& opts) {
    require_keys(params, {}, "reproduce config");
    AcceptanceOptions ao;
    ao.quick = opts.quick;
    ao.seed = opts.seed ? opts.seed : ao.seed;
    const auto results = run_acceptance(ao);

    json entries = json::array();
    bool all = true;
    std::vector<std::vector<double>> rows;
    for (const auto& r : results) {
        entries.push_back({{"id", r.id},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"runtime_seconds", r.runtime_seconds}});
        rows.push_back({double(r.id), r.pass ? 1.0 : 0.0, r.runtime_seconds});
        all = all && r.pass;
    }
    write_csv(path_in(opts, "acceptance.csv"), {"criterion", "pass", "runtime_s"}, rows);
    json summary;
    summary["criteria"] = entries;
    summary["all_pass"] = all;
    write_json_file(path_in(opts, "acceptance.json"), summary);
    if (!all) throw Error("acceptance criteria failed (see acceptance.json)");
    return summary;
}

} // namespace

DiscreteSurface surface_from_json(const json& spec, const CurvatureField& field) {
    require_keys(spec,
                 {"kind", "radius", "rows", "cols", "coeffs", "step", "domain",
                  "spacing", "patch"},
                 "surface spec");
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "round-sphere") {
        return DiscreteSurface::round_sphere(spec.value("radius", 1.0),
                                             spec.value("rows", 128),
                                             spec.value("cols", 128));
    }
    if (kind == "rotational-sphere" || kind == "hemisphere") {
        RotationalOptions ro;
        ro.ring_rows = spec.value("rows", 128);
        ro.cols = spec.value("cols", ro.ring_rows);
        ro.step = spec.value("step", 1e-3);
        const ZonalProfile zonal =
            ZonalProfile::polynomial(spec.at("coeffs").get<std::vector<double>>());
        const RotationalBuild build = kind == "hemisphere" ? build_hemisphere(zonal, ro)
                                                           : build_sphere(zonal, ro);
        return build.surface;
    }
    if (kind == "disk") {
        return DiscreteSurface::flat_disk(spec.value("radius", 1.0),
                                          spec.value("spacing", 1.0 / 64));
    }
    if (kind == "cap") {
        // Solved constant-curvature graph over a disk, zero boundary data.
        const double r = spec.value("radius", 0.5);
        const double h = spec.value("spacing", 1.0 / 64);
        const GridDomain dom = GridDomain::disk(Vec2(0, 0), r, h);
        const GraphSolution sol = solve_dirichlet(field, dom);
        if (!sol.converged) throw Error("cap solve stalled");
        return DiscreteSurface::from_graph(sol);
    }
    if (kind == "graph") {
        const GridDomain dom = GridDomain::from_json(spec.at("domain"));
        GraphSolution sol = solve_dirichlet(field, dom);
        if (!sol.converged) throw Error("graph solve stalled");
        if (spec.contains("patch")) {
            const json& p = spec.at("patch");
            sol = restrict_to_rectangle(
                sol, Vec2(p.at("x0").get<double>(), p.at("y0").get<double>()),
                Vec2(p.at("x1").get<double>(), p.at("y1").get<double>()));
        }
        return DiscreteSurface::from_graph(sol);
    }
    throw ConfigError("unknown surface kind '" + kind + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& command, const json& params) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), command) == names.end())
        throw ConfigError("unknown command '" + command + "'");
    if (!params.is_object() && !params.is_null())
        throw ConfigError("config must be a JSON object");
    return ExperimentConfig{command, params.is_null() ? json::object() : params};
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "flat-curve", "solve-graph",  "rotational",   "stability-report", "estrella",
        "height-sweep", "radius-sweep", "flux",       "reproduce"};
    return names;
}

json run_command(const ExperimentConfig& config, const RunOptions& opts) {
    if (config.command == "flat-curve") return run_flat_curve(config.params, opts);
    if (config.command == "solve-graph") return run_solve_graph(config.params, opts);
    if (config.command == "rotational") return run_rotational(config.params, opts);
    if (config.command == "stability-report")
        return run_stability_report(config.params, opts);
    if (config.command == "estrella") return run_estrella(config.params, opts);
    if (config.command == "height-sweep") return run_height_sweep(config.params, opts);
    if (config.command == "radius-sweep") return run_radius_sweep(config.params, opts);
    if (config.command == "flux") return run_flux(config.params, opts);
    if (config.command == "reproduce") return run_reproduce(config.params, opts);
    throw ConfigError("unknown command '" + config.command + "'");
}

} // namespace hsurf
