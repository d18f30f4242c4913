#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hsurf/error.hpp"
#include "hsurf/experiment.hpp"
#include "hsurf/io.hpp"

using namespace hsurf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("hsurf_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json constant_field(double h0) {
    return {{"kind", "analytic"}, {"formula", "constant"}, {"params", {{"H0", h0}}}};
}

} // namespace

TEST_CASE("flat-curve command writes the circle artifacts") {
    RunOptions opts;
    opts.out_dir = scratch_dir("flat");
    const auto cfg = ExperimentConfig::parse(
        "flat-curve", json{{"field", constant_field(1.0)}, {"s_max", 2 * kPi}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["closed"].get<bool>());
    CHECK(summary["gap"].get<double>() < 1e-8);
    CHECK(summary["period"].get<double>() == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(fs::exists(fs::path(opts.out_dir) / "curve.csv"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "curve.svg"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "flat_curve.json"));
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    const auto cfg = ExperimentConfig::parse(
        "flat-curve", json{{"field", constant_field(1.0)}, {"s_max", kPi}});
    RunOptions a, b;
    a.out_dir = scratch_dir("det_a");
    b.out_dir = scratch_dir("det_b");
    run_command(cfg, a);
    run_command(cfg, b);
    for (const char* name : {"curve.csv", "curve.svg", "flat_curve.json"})
        CHECK(slurp((fs::path(a.out_dir) / name).string()) ==
              slurp((fs::path(b.out_dir) / name).string()));
}

TEST_CASE("estrella command reports the linear-field minimum") {
    RunOptions opts;
    opts.out_dir = scratch_dir("estrella");
    const json field = {{"kind", "analytic"},
                        {"formula", "linear"},
                        {"params", {{"a", 1.0}, {"b", 0.0}, {"axis", {0, 0, 1}}}}};
    const auto cfg =
        ExperimentConfig::parse("estrella", json{{"field", field}, {"resolution", 2000}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["c"].get<double>() == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(std::abs(summary["argmin"][2].get<double>()) < 0.05);
    CHECK_FALSE(summary["certified_positive"].get<bool>());
    CHECK_FALSE(summary.contains("radius_bound"));
}

TEST_CASE("stability-report on the unit sphere finds the negative eigenvalue") {
    RunOptions opts;
    opts.out_dir = scratch_dir("report");
    opts.quick = true;
    const json surface = {{"kind", "round-sphere"}, {"rows", 48}, {"cols", 48}};
    const auto cfg = ExperimentConfig::parse(
        "stability-report", json{{"field", constant_field(1.0)}, {"surface", surface}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["lambda0"].get<double>() == doctest::Approx(-2.0).epsilon(0.02));
    CHECK(summary["certificate"].get<std::string>() == "unstable");
    CHECK(summary["estrella_c"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fs::exists(fs::path(opts.out_dir) / "operator.txt"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "fields.csv"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "mesh.obj"));
}

TEST_CASE("solve-graph emits diagnostics and the mesh") {
    RunOptions opts;
    opts.out_dir = scratch_dir("graph");
    const json domain = {{"type", "disk"},
                         {"radius", 0.5},
                         {"spacing", 1.0 / 24},
                         {"boundary", {{"kind", "zero"}}}};
    const auto cfg = ExperimentConfig::parse(
        "solve-graph", json{{"field", constant_field(1.0)}, {"domain", domain}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["converged"].get<bool>());
    CHECK(summary["max_height"].get<double>() ==
          doctest::Approx(1.0 - std::sqrt(0.75)).epsilon(0.02));
    CHECK(fs::exists(fs::path(opts.out_dir) / "mesh.obj"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "solution.csv"));
}

TEST_CASE("rotational command builds spheres and hemispheres") {
    RunOptions opts;
    opts.out_dir = scratch_dir("rot");
    opts.quick = true;
    const auto cfg = ExperimentConfig::parse(
        "rotational",
        json{{"zonal", {{"coeffs", {1.0, 0.0, 0.5}}}}, {"shape", "sphere"}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["pole_to_pole"].get<bool>());
    CHECK(summary["strictly_convex"].get<bool>());
    CHECK(summary["curvature_residual"].get<double>() < 1e-5);

    const auto hemi = ExperimentConfig::parse(
        "rotational",
        json{{"zonal", {{"coeffs", {1.0, 0.5}}}}, {"shape", "hemisphere"}});
    const json hs = run_command(hemi, opts);
    CHECK(hs["boundary_radius"].get<double>() > 0.0);
    CHECK(hs["comparison_radius"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("height-sweep follows the cap family") {
    RunOptions opts;
    opts.out_dir = scratch_dir("heights");
    const auto cfg = ExperimentConfig::parse(
        "height-sweep", json{{"field", constant_field(1.0)},
                             {"radii", {0.3, 0.5}},
                             {"spacing", 1.0 / 32}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["item5_holds"].get<bool>());
    CHECK(summary["entries"].size() == 2);
    CHECK(summary["entries"][1]["max_height"].get<double>() ==
          doctest::Approx(1.0 - std::sqrt(0.75)).epsilon(0.05));
}

TEST_CASE("flux command reproduces the obstruction value") {
    RunOptions opts;
    opts.out_dir = scratch_dir("flux");
    const json field = {{"kind", "analytic"},
                        {"formula", "linear"},
                        {"params", {{"a", 1.0}, {"b", 0.0}, {"axis", {0, 0, 1}}}}};
    const json surface = {{"kind", "round-sphere"}, {"rows", 96}, {"cols", 96}};
    const auto cfg = ExperimentConfig::parse(
        "flux",
        json{{"field", field}, {"surface", surface}, {"direction", {0, 0, 1}}});
    const json summary = run_command(cfg, opts);
    CHECK(summary["flux"].get<double>() == doctest::Approx(4 * kPi / 3).epsilon(0.01));
}

TEST_CASE("invalid configurations are rejected up front") {
    CHECK_THROWS_AS(ExperimentConfig::parse("no-such-command", json::object()),
                    ConfigError);
    RunOptions opts;
    opts.out_dir = scratch_dir("bad");
    const auto unknown_key = ExperimentConfig::parse(
        "flat-curve", json{{"field", constant_field(1.0)}, {"bogus", 1}});
    CHECK_THROWS_AS(run_command(unknown_key, opts), ConfigError);

    const auto missing_field = ExperimentConfig::parse("estrella", json::object());
    CHECK_THROWS_AS(run_command(missing_field, opts), ConfigError);
}

TEST_CASE("matrix triplet export round-trips through text") {
    SparseMat m(3, 3);
    std::vector<Triplet> trip = {{0, 0, 1.5}, {1, 2, -2.25}, {2, 1, 1e-17}};
    m.setFromTriplets(trip.begin(), trip.end());
    const std::string path = scratch_dir("mat") + "/m.txt";
    write_matrix_triplets(path, m);
    const std::string text = slurp(path);
    CHECK(text.find("3 3 3") == 0);
    CHECK(text.find("-2.25") != std::string::npos);
}
