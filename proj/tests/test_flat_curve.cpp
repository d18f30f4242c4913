#include <cmath>
#include <random>

#include "doctest.h"
#include "hsurf/error.hpp"
#include "hsurf/flat_curve.hpp"

using namespace hsurf;

TEST_CASE("constant curvature closes into the half-radius circle") {
    const auto one = CurvatureField::constant(1.0);
    FlatCurveOptions opts;
    opts.s_max = 2 * kPi;
    const auto sol = integrate_flat_curve(one, Vec3::UnitX(), Vec3::UnitY(), opts);

    REQUIRE(sol.period.has_value());
    CHECK(*sol.period == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(sol.closed);
    CHECK(sol.closure_gap < 1e-8);

    // All points on the circle of radius 1/2 centered half a radius along
    // the initial normal (theta0 = 0 -> center (0, 1/2)).
    const Vec2 center(0, 0.5);
    double worst = 0;
    for (const Vec2& p : sol.points)
        worst = std::max(worst, std::abs((p - center).norm() - 0.5));
    CHECK(worst < 1e-6);
}

TEST_CASE("vanishing curvature gives the straight line") {
    // Field vanishing at the start normal.
    const auto lin = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    FlatCurveOptions opts;
    opts.theta0 = kPi / 2; // normal = -e1, H = 0 there
    opts.s_max = 3.0;
    const auto sol = integrate_flat_curve(lin, Vec3::UnitX(), Vec3::UnitY(), opts);
    CHECK(sol.straight_line);
    const Vec2 dir(std::cos(opts.theta0), std::sin(opts.theta0));
    for (size_t k = 0; k < sol.points.size(); ++k)
        CHECK((sol.points[k] - sol.s[k] * dir).norm() < 1e-12);
}

TEST_CASE("grim-reaper profile follows the closed form") {
    // Plane (e1, e3): Hhat(theta) = cos(theta), so theta' = 2 cos(theta)
    // and theta(s) = gd(2s) = 2 atan(exp(2s)) - pi/2.
    const auto lin = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    FlatCurveOptions opts;
    opts.s_max = 5.0;
    opts.step = 1e-3;
    const auto sol = integrate_flat_curve(lin, Vec3::UnitX(), Vec3::UnitZ(), opts);
    CHECK_FALSE(sol.straight_line);
    CHECK_FALSE(sol.closed);
    double worst = 0;
    for (size_t k = 0; k < sol.s.size(); ++k) {
        const double exact = 2.0 * std::atan(std::exp(2.0 * sol.s[k])) - kPi / 2;
        worst = std::max(worst, std::abs(sol.theta[k] - exact));
    }
    CHECK(worst < 1e-9);
    // theta approaches the asymptote where Hhat vanishes.
    CHECK(sol.theta.back() > kPi / 2 - 5e-4);
    CHECK(sol.theta.back() < kPi / 2 + 1e-12);
}

TEST_CASE("arclength parametrization holds") {
    const auto f = CurvatureField::zonal({1.2, 0.0, 0.4}, Vec3::UnitX());
    FlatCurveOptions opts;
    opts.s_max = 5.0;
    const auto sol = integrate_flat_curve(f, Vec3::UnitX(), Vec3::UnitY(), opts);
    for (size_t k = 1; k < sol.points.size(); ++k) {
        const double ds = sol.s[k] - sol.s[k - 1];
        const double chord = (sol.points[k] - sol.points[k - 1]).norm();
        CHECK(std::abs(chord / ds - 1.0) < 1e-4); // chord < arc by O(ds^2 kappa^2)
    }
}

TEST_CASE("ODE error decreases at fourth order") {
    const auto f = CurvatureField::zonal({1.0, 0.3, 0.2}, Vec3::UnitY());
    auto run = [&](double step) {
        FlatCurveOptions opts;
        opts.s_max = 2.0;
        opts.step = step;
        opts.cap_step = false;
        return integrate_flat_curve(f, Vec3::UnitX(), Vec3::UnitY(), opts);
    };
    const auto fine = run(1.0 / 8192);
    auto err = [&](const PlanarCurveSolution& sol) {
        // Compare final angles at s = 2.
        return std::abs(sol.theta.back() - fine.theta.back());
    };
    const double e1 = err(run(1.0 / 128));
    const double e2 = err(run(1.0 / 256));
    CHECK(e1 / std::max(e2, 1e-16) > 8.0);
}

TEST_CASE("closure detection agrees with the circle integral") {
    // Even positive field: closed.
    const auto even = CurvatureField::zonal({1.0, 0.0, 0.6}, Vec3::UnitX());
    FlatCurveOptions opts;
    opts.s_max = 12.0;
    auto sol = integrate_flat_curve(even, Vec3::UnitX(), Vec3::UnitY(), opts);
    auto res = detect_closure(sol, even);
    CHECK(res.closed);
    CHECK(res.criteria_agree);
    CHECK(res.integral_norm < 1e-6);

    // Odd perturbation: the integral is nonzero and the curve stays open.
    const auto skew = CurvatureField::analytic(
        [](const Vec3& x) { return 1.0 / (1.0 + 0.4 * x.x()); });
    sol = integrate_flat_curve(skew, Vec3::UnitX(), Vec3::UnitY(), opts);
    res = detect_closure(sol, skew);
    CHECK_FALSE(res.closed);
    CHECK(res.criteria_agree);
    CHECK(res.integral_norm > 1e-3);
    CHECK(res.gap > 1e-3);
}

TEST_CASE("randomized closure equivalence has no disagreements") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> coef(-0.3, 0.3);
    int closed_count = 0, open_count = 0;
    for (int trial = 0; trial < 24; ++trial) {
        CurvatureField field = CurvatureField::constant(1.0);
        if (trial % 2 == 0) {
            // Even zonal in the plane: closure integral vanishes by parity.
            field = CurvatureField::zonal({1.0 + std::abs(coef(rng)), 0.0, coef(rng)},
                                          trial % 4 == 0 ? Vec3::UnitX() : Vec3::UnitY());
        } else {
            const double a = 0.05 + std::abs(coef(rng));
            const Vec3 axis = Vec3(1, coef(rng), coef(rng)).normalized();
            field = CurvatureField::linear(a, 1.0 + std::abs(coef(rng)), axis);
        }
        FlatCurveOptions opts;
        opts.s_max = 16.0;
        const auto sol = integrate_flat_curve(field, Vec3::UnitX(), Vec3::UnitY(), opts);
        const auto res = detect_closure(sol, field);
        CHECK(res.criteria_agree);
        (res.closed ? closed_count : open_count) += 1;
    }
    CHECK(closed_count >= 8);
    CHECK(open_count >= 8);
}

TEST_CASE("detect_closure requires a full period") {
    const auto one = CurvatureField::constant(1.0);
    FlatCurveOptions opts;
    opts.s_max = 1.0; // less than the period pi
    const auto sol = integrate_flat_curve(one, Vec3::UnitX(), Vec3::UnitY(), opts);
    CHECK_THROWS_AS(detect_closure(sol, one), ConfigError);
}
