#include <cmath>

#include "doctest.h"
#include "hsurf/error.hpp"
#include "hsurf/rotational.hpp"

using namespace hsurf;

TEST_CASE("constant profile shoots the unit sphere meridian") {
    const auto one = ZonalProfile::polynomial({1.0});
    ProfileOptions opts;
    opts.step = 1e-3;
    const auto prof = integrate_profile(one, ProfileStart{}, opts);
    REQUIRE(prof.ends_at_pole);
    CHECK(prof.total_length() == doctest::Approx(kPi).epsilon(1e-6));
    CHECK(prof.end_pole_angle_error < 1e-6);
    // Meridian of the unit sphere: x = sin s, z = z0 + 1 - cos s with the
    // start pole at the origin.  The last sample is the series-closed pole
    // with its own (coarser) tolerance.
    double worst = 0;
    for (size_t k = 0; k + 1 < prof.size(); ++k) {
        worst = std::max(worst, std::abs(prof.x[k] - std::sin(prof.s[k])));
        worst = std::max(worst, std::abs(prof.z[k] - (1.0 - std::cos(prof.s[k]))));
    }
    CHECK(worst < 1e-8);
    CHECK(std::abs(prof.z.back() - 2.0) < 1e-5);
}

TEST_CASE("scaling: h = 2 gives the half sphere radius") {
    const auto two = ZonalProfile::polynomial({2.0});
    const auto prof = integrate_profile(two, ProfileStart{}, {});
    REQUIRE(prof.ends_at_pole);
    CHECK(prof.total_length() == doctest::Approx(kPi / 2).epsilon(1e-6));
    double xmax = 0;
    for (double x : prof.x) xmax = std::max(xmax, x);
    CHECK(xmax == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("even quadratic profile closes into a convex sphere") {
    const auto zon = ZonalProfile::polynomial({1.0, 0.0, 0.5});
    RotationalOptions opts;
    opts.ring_rows = 96;
    opts.cols = 96;
    const auto build = build_sphere(zon, opts);
    CHECK(build.surface.closed());
    CHECK(build.strictly_convex);
    CHECK(build.pole_closure_error < 1e-4);
    CHECK(build.mirror_asymmetry < 1e-6);
    CHECK(build.curvature_residual < 1e-6);

    // Pointwise prescribed-curvature residual on the revolved mesh.
    double worst = 0;
    for (int v = 0; v < build.surface.vertex_count(); ++v) {
        const double h = build.surface.mean_curvature(v);
        const double target = zon.h(build.surface.normal(v).z());
        worst = std::max(worst, std::abs(h - target));
    }
    CHECK(worst < 1e-9); // curvatures stored from the ODE identity
}

TEST_CASE("independent high-resolution shooting agrees") {
    const auto zon = ZonalProfile::polynomial({1.0, 0.0, 1.0});
    RotationalOptions coarse;
    coarse.step = 2e-3;
    RotationalOptions fine;
    fine.step = 2e-4;
    const auto a = build_sphere(zon, coarse);
    const auto b = build_sphere(zon, fine);
    CHECK(a.profile.total_length() ==
          doctest::Approx(b.profile.total_length()).epsilon(1e-8));
    // Equatorial radius compared across resolutions (sample-max carries an
    // O(step^2) offset around the flat maximum).
    double xa = 0, xb = 0;
    for (double x : a.profile.x) xa = std::max(xa, x);
    for (double x : b.profile.x) xb = std::max(xb, x);
    CHECK(xa == doctest::Approx(xb).epsilon(1e-5));
    // Non-round sphere: equatorial radius differs from the polar-cap scale.
    CHECK(xa < 1.0 / zon.h(0.0) + 1e-6);
}

TEST_CASE("odd or sign-changing profiles are rejected") {
    CHECK_THROWS_AS(build_sphere(ZonalProfile::polynomial({1.0, 0.3}), {}),
                    GeometryError);
    CHECK_THROWS_AS(build_sphere(ZonalProfile::polynomial({-0.5, 0.0, 1.0}), {}),
                    GeometryError);
}

TEST_CASE("hemisphere of the constant profile is the unit cap") {
    const auto one = ZonalProfile::polynomial({1.0});
    const auto build = build_hemisphere(one, {});
    CHECK_FALSE(build.surface.closed());
    CHECK(build.boundary_radius == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(build.strictly_convex);
    CHECK(build.gauss_map_monotone);
    CHECK_FALSE(build.surface.boundary_vertices().empty());

    // Gauss image covers <eta,e3> in [0,1] monotonically.
    const auto& prof = build.profile;
    for (size_t k = 1; k < prof.size(); ++k)
        CHECK(prof.theta[k] >= prof.theta[k - 1] - 1e-12);
    CHECK(prof.theta.back() == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("tilted-linear hemisphere reports the comparison circle") {
    // h(t) = 1 + t/2 > 0 on [0, 1].
    const auto zon = ZonalProfile::polynomial({1.0, 0.5});
    const auto build = build_hemisphere(zon, {});
    CHECK(build.strictly_convex);
    CHECK(build.comparison_radius == doctest::Approx(0.5).epsilon(1e-12));
    // The boundary circle has curvature 2 h(0) = 2 by the flat-cylinder
    // comparison, so its radius should land near 1/2.
    CHECK(build.boundary_radius == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("profiles vanishing inside (0,1) cannot reach the equator") {
    // h(t) = t - 0.4: h(1) > 0 but h vanishes at t = 0.4.
    const auto zon = ZonalProfile::polynomial({-0.4, 1.0});
    CHECK_THROWS_AS(build_hemisphere(zon, {}), GeometryError);
}

TEST_CASE("off-axis starts integrate general profiles") {
    const auto zon = ZonalProfile::polynomial({1.0});
    ProfileStart start;
    start.at_pole = false;
    start.x0 = 0.6;
    start.z0 = 0.0;
    start.theta0 = 0.3;
    ProfileOptions opts;
    opts.s_max = 2.0;
    opts.stop_at_pole = false;
    const auto prof = integrate_profile(zon, start, opts);
    CHECK(prof.size() > 100);
    // Arclength parametrization is preserved.
    for (size_t k = 1; k < prof.size(); ++k) {
        const double ds = prof.s[k] - prof.s[k - 1];
        const double dx = prof.x[k] - prof.x[k - 1];
        const double dz = prof.z[k] - prof.z[k - 1];
        if (ds > 1e-9)
            CHECK(std::abs(std::hypot(dx, dz) / ds - 1.0) < 1e-5);
    }
}

TEST_CASE("zonal field induced by a profile matches") {
    const auto zon = ZonalProfile::polynomial({1.0, 0.0, 0.25});
    const auto field = zonal_field(zon);
    CHECK(field.eval(Vec3::UnitZ()) == doctest::Approx(1.25));
    CHECK(field.eval(Vec3::UnitX()) == doctest::Approx(1.0));
    CHECK(field.has_analytic_derivatives());
    // Evenness shows up as a reflection symmetry.
    const Mat3 reflect =
        Mat3::Identity() - 2.0 * Vec3::UnitZ() * Vec3::UnitZ().transpose();
    CHECK(symmetry_residual(field, reflect) < 1e-12);
}
