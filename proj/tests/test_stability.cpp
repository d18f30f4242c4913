#include <cmath>
#include <random>

#include "doctest.h"
#include "hsurf/error.hpp"
#include "hsurf/geodesic.hpp"
#include "hsurf/graph_solver.hpp"
#include "hsurf/rotational.hpp"
#include "hsurf/stability.hpp"

using namespace hsurf;

namespace {

GraphSolution solve_cap(double R, double h) {
    const auto one = CurvatureField::constant(1.0);
    const auto dom = GridDomain::disk(Vec2(0, 0), R, h, [R](const Vec2& p) {
        const double r = std::min(p.norm(), 1.0);
        return std::sqrt(1.0 - R * R) - std::sqrt(1.0 - r * r);
    });
    auto sol = solve_dirichlet(one, dom);
    REQUIRE(sol.converged);
    return sol;
}

GraphSolution solve_translator(double half_width, double h) {
    const auto f = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    const auto dom = GridDomain::rectangle(Vec2(-half_width, -half_width),
                                           Vec2(half_width, half_width), h);
    auto sol = solve_dirichlet(f, dom);
    REQUIRE(sol.converged);
    return sol;
}

// Interior patch of a solved translator: smooth up to the patch boundary,
// no stair-step nodes and no corner kinks from the outer Dirichlet data.
GraphSolution translator_patch(double half_width, double h) {
    auto big = solve_translator(half_width + 0.35, h);
    return restrict_to_rectangle(big, Vec2(-half_width, -half_width),
                                 Vec2(half_width, half_width));
}

} // namespace

TEST_CASE("operator reduces to laplacian plus |sigma|^2 for constant fields") {
    const auto surf = DiscreteSurface::round_sphere(1.0, 48, 48);
    const auto one = CurvatureField::constant(1.0);
    const auto op = assemble_stability_operator(surf, one);
    for (int v = 0; v < surf.vertex_count(); ++v) {
        CHECK(op.advection[v].norm() < 1e-14);
        CHECK(op.potential[v] == doctest::Approx(2.0).epsilon(1e-12));
    }
    // Constant functions: L(1) = |sigma|^2 = 2.
    VecX ones = VecX::Ones(surf.vertex_count());
    const VecX r = op.matrix * ones;
    for (int v = 0; v < surf.vertex_count(); ++v)
        CHECK(r[v] == doctest::Approx(2.0).epsilon(5e-7));
}

TEST_CASE("graph operator is symmetric under the area weights for constant H") {
    const auto sol = solve_cap(0.5, 1.0 / 24);
    const auto surf = DiscreteSurface::from_graph(sol);
    const auto op =
        assemble_stability_operator(surf, CurvatureField::constant(1.0));
    // W L is symmetric for the conservative scheme away from the
    // stair-step fallbacks.
    Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix);
    double worst = 0;
    for (int a = 0; a < surf.vertex_count(); ++a) {
        if (surf.is_boundary(a)) continue;
        const double wa = surf.vertex_area(a);
        for (int b = a + 1; b < surf.vertex_count(); ++b) {
            if (surf.is_boundary(b)) continue;
            const double wb = surf.vertex_area(b);
            if (dense(a, b) == 0.0 && dense(b, a) == 0.0) continue;
            const auto [ia, ja] = surf.grid_coords(a);
            const auto [ib, jb] = surf.grid_coords(b);
            // skip rows touching the stair boundary
            bool clean = true;
            for (int d = -2; d <= 2; ++d) {
                clean = clean && sol.domain().inside(ia + d, ja) &&
                        sol.domain().inside(ia, ja + d) &&
                        sol.domain().inside(ib + d, jb) && sol.domain().inside(ib, jb + d);
            }
            if (!clean) continue;
            worst = std::max(worst, std::abs(wa * dense(a, b) - wb * dense(b, a)) /
                                        std::max(1.0, std::abs(wa * dense(a, b))));
        }
    }
    CHECK(worst < 0.02);
}

TEST_CASE("jacobi fields on the round sphere converge at second order") {
    const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    const auto one = CurvatureField::constant(1.0);
    double prev[3] = {0, 0, 0};
    int step = 0;
    for (int n : {48, 96}) {
        const auto surf = DiscreteSurface::round_sphere(1.0, n, n);
        const auto op = assemble_stability_operator(surf, one);
        for (int k = 0; k < 3; ++k) {
            const double res = jacobi_residual(op, axes[k]);
            if (step == 1) CHECK(prev[k] / std::max(res, 1e-15) > 3.0);
            prev[k] = res;
        }
        ++step;
    }
    CHECK(prev[0] < 2e-4);
    CHECK(prev[2] < 2e-4);
}

TEST_CASE("jacobi fields on the solved translator patch") {
    const auto f = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    double prev = 0;
    int step = 0;
    for (double h : {1.0 / 64, 1.0 / 128}) {
        const auto sol = translator_patch(0.5, h);
        const auto surf = DiscreteSurface::from_graph(sol);
        const auto op = assemble_stability_operator(surf, f);
        double worst = 0;
        for (const Vec3& a :
             {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()), Vec3(Vec3::UnitZ())})
            worst = std::max(worst, jacobi_residual(op, a));
        if (step == 1) CHECK(prev / std::max(worst, 1e-15) > 3.0);
        prev = worst;
        ++step;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("jacobi fields on the rotational quadratic sphere") {
    const auto zon = ZonalProfile::polynomial({1.0, 0.0, 1.0});
    const auto field = zonal_field(zon);
    double prev = 0;
    int step = 0;
    for (int n : {48, 96}) {
        RotationalOptions opts;
        opts.ring_rows = n;
        opts.cols = n;
        const auto build = build_sphere(zon, opts);
        const auto op = assemble_stability_operator(build.surface, field);
        double worst = 0;
        for (const Vec3& a :
             {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()), Vec3(Vec3::UnitZ())})
            worst = std::max(worst, jacobi_residual(op, a));
        if (step == 1) CHECK(prev / std::max(worst, 1e-15) > 3.0);
        prev = worst;
        ++step;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("principal eigenvalue of the closed unit sphere is -2") {
    const auto surf = DiscreteSurface::round_sphere(1.0, 64, 64);
    const auto op = assemble_stability_operator(surf, CurvatureField::constant(1.0));
    const auto eig = principal_eigenvalue(op);
    REQUIRE(eig.converged);
    CHECK(eig.sign_definite);
    CHECK(eig.lambda0 == doctest::Approx(-2.0).epsilon(0.01));
    // Eigenfunction is the constant.
    const double mean = eig.psi.mean();
    for (int v = 0; v < surf.vertex_count(); ++v)
        CHECK(std::abs(eig.psi[v] - mean) < 0.05 * std::abs(mean));
}

TEST_CASE("principal eigenvalue of the unit disk hits the Bessel zero") {
    const auto surf = DiscreteSurface::flat_disk(1.0, 1.0 / 96);
    const auto op = assemble_stability_operator(surf, CurvatureField::constant(0.0));
    const auto eig = principal_eigenvalue(op);
    REQUIRE(eig.converged);
    CHECK(eig.sign_definite);
    const double j01 = 2.404825557695773;
    CHECK(eig.lambda0 == doctest::Approx(j01 * j01).epsilon(0.01));
}

TEST_CASE("eigenvalue decreases when the region grows") {
    const auto zero = CurvatureField::constant(0.0);
    const auto small = DiscreteSurface::flat_disk(0.6, 1.0 / 48);
    const auto large = DiscreteSurface::flat_disk(1.0, 1.0 / 48);
    const auto l_small =
        principal_eigenvalue(assemble_stability_operator(small, zero));
    const auto l_large =
        principal_eigenvalue(assemble_stability_operator(large, zero));
    REQUIRE(l_small.converged);
    REQUIRE(l_large.converged);
    CHECK(l_small.lambda0 > l_large.lambda0 + 1.0);
}

TEST_CASE("solved graphs have positive principal eigenvalue") {
    const auto one = CurvatureField::constant(1.0);
    const auto sol = solve_cap(0.5, 1.0 / 32);
    const auto surf = DiscreteSurface::from_graph(sol);
    const auto eig = principal_eigenvalue(assemble_stability_operator(surf, one));
    REQUIRE(eig.converged);
    CHECK(eig.lambda0 > 0.0);

    const auto f = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    const auto tr = solve_translator(0.8, 1.0 / 24);
    const auto tsurf = DiscreteSurface::from_graph(tr);
    const auto teig = principal_eigenvalue(assemble_stability_operator(tsurf, f));
    REQUIRE(teig.converged);
    CHECK(teig.lambda0 > 0.0);
}

TEST_CASE("schrodinger transform basics") {
    const auto surf = DiscreteSurface::round_sphere(1.0, 48, 48);
    const auto one = CurvatureField::constant(1.0);
    const auto op = assemble_stability_operator(surf, one);

    std::vector<double> q(surf.vertex_count(), 1.5);
    std::vector<Vec3> zero_field(surf.vertex_count(), Vec3::Zero());
    const auto q_out = schrodinger_transform(op, q, zero_field);
    for (double v : q_out) CHECK(v == doctest::Approx(1.5));

    const auto qh = q_transform(op, one);
    for (int v = 0; v < surf.vertex_count(); ++v)
        CHECK(qh[v] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("the two Q routes agree on a zonal sphere") {
    const auto zon = ZonalProfile::polynomial({1.0, 0.0, 0.5});
    const auto field = zonal_field(zon);
    double prev = 0;
    int step = 0;
    for (int n : {48, 96}) {
        RotationalOptions opts;
        opts.ring_rows = n;
        opts.cols = n;
        const auto build = build_sphere(zon, opts);
        const auto op = assemble_stability_operator(build.surface, field);
        const auto qa = q_transform(op, field);
        const auto qb = q_expanded(build.surface, field);
        double worst = 0;
        for (int v = 0; v < build.surface.vertex_count(); ++v)
            worst = std::max(worst, std::abs(qa[v] - qb[v]));
        if (step == 1) CHECK(prev / std::max(worst, 1e-15) > 3.0);
        prev = worst;
        ++step;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("hessian split inequality holds pointwise") {
    // ((a1-a2)/2)^2 <= (lap^2)/4 - det for any symmetric 2x2 form: the
    // difference is the squared off-diagonal entry.
    const auto field = CurvatureField::zonal({1.0, -0.3, 0.6}, Vec3(1, 1, 1).normalized());
    std::mt19937 rng(41);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 40; ++k) {
        const Vec3 x = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
        const auto frame = tangent_frame(x);
        const double ang = nd(rng);
        const Vec3 e1 = std::cos(ang) * frame.t1 + std::sin(ang) * frame.t2;
        const Vec3 e2 = -std::sin(ang) * frame.t1 + std::cos(ang) * frame.t2;
        const double a1 = field.hessian_form(x, e1, e1);
        const double a2 = field.hessian_form(x, e2, e2);
        const Mat2 h = field.hessian(x);
        const double lap = h.trace();
        const double det = h.determinant();
        const double lhs = 0.25 * (a1 - a2) * (a1 - a2);
        const double rhs = 0.25 * lap * lap - det;
        CHECK(lhs <= rhs + 1e-10);
    }
}

TEST_CASE("margin check on the sharp round sphere") {
    const auto surf = DiscreteSurface::round_sphere(1.0, 64, 64);
    const auto one = CurvatureField::constant(1.0);
    const auto rep = desi_q_check(surf, one, 3.0);
    CHECK(std::abs(rep.min_margin) < 1e-9); // Q + K = 2 + 1 = c = 3 exactly
    CHECK_THROWS_AS(desi_q_check(surf, one, -1.0), ConfigError);
}

TEST_CASE("margin equals the umbilic defect for constant fields") {
    // Constant H = 1 graph with nonzero boundary data: not a sphere piece,
    // margin = (k1-k2)^2/4 pointwise up to discretization.
    const auto one = CurvatureField::constant(1.0);
    const auto dom = GridDomain::disk(Vec2(0, 0), 0.45, 1.0 / 64, [](const Vec2& p) {
        return 0.1 * p.x();
    });
    const auto big = solve_dirichlet(one, dom);
    REQUIRE(big.converged);
    const auto sol = restrict_to_rectangle(big, Vec2(-0.28, -0.28), Vec2(0.28, 0.28));
    const auto surf = DiscreteSurface::from_graph(sol);
    const auto op = assemble_stability_operator(surf, one);
    const auto q = q_transform(op, one);
    double worst = 0;
    bool nontrivial = false;
    for (int v = 0; v < surf.vertex_count(); ++v) {
        if (surf.is_boundary(v)) continue;
        const auto [i, j] = surf.grid_coords(v);
        bool deep = true;
        for (int d = -2; d <= 2 && deep; ++d)
            deep = sol.domain().interior(i + d, j) && sol.domain().interior(i, j + d);
        if (!deep) continue;
        const double defect =
            0.25 * std::pow(surf.kappa1(v) - surf.kappa2(v), 2);
        const double margin = q[v] + surf.gauss_curvature(v) - 3.0;
        worst = std::max(worst, std::abs(margin - defect));
        nontrivial = nontrivial || defect > 1e-3;
    }
    CHECK(nontrivial);
    CHECK(worst < 5e-3);
}

TEST_CASE("radius check on the unit hemisphere") {
    const auto build = build_hemisphere(ZonalProfile::polynomial({1.0}), {});
    const auto rep = radius_check(build.surface, 3.0);
    CHECK(rep.intrinsic_radius == doctest::Approx(kPi / 2).epsilon(0.02));
    CHECK(rep.bound == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
    CHECK(rep.pass);

    const auto closed = DiscreteSurface::round_sphere(1.0, 32, 32);
    CHECK_THROWS_AS(radius_check(closed, 3.0), GeometryError);
}

TEST_CASE("geodesic distances on the sphere grid track great circles") {
    // Pole source: meridians are exact edge chains.
    const auto surf = DiscreteSurface::round_sphere(1.0, 128, 256);
    const auto dist = geodesic_distance(surf, {0});
    double worst = 0;
    for (int v = 0; v < surf.vertex_count(); ++v) {
        const double exact = std::acos(std::clamp(-surf.position(v).z(), -1.0, 1.0));
        if (exact < 0.3) continue;
        worst = std::max(worst, std::abs(dist[v] - exact) / exact);
    }
    CHECK(worst < 0.005);

    // Equator source at 256^2: every lattice direction is exercised.
    // Short distances are resolution-limited, so the 2% accuracy claim is
    // for separations of at least one radian.
    const auto fine = DiscreteSurface::round_sphere(1.0, 256, 256);
    int src = -1;
    double best = 1e9;
    for (int v = 0; v < fine.vertex_count(); ++v) {
        const double d = std::abs(fine.position(v).z());
        if (d < best) {
            best = d;
            src = v;
        }
    }
    const Vec3 ps = fine.position(src);
    const auto d2 = geodesic_distance(fine, {src});
    double worst_far = 0, worst_abs = 0;
    for (int v = 0; v < fine.vertex_count(); ++v) {
        const double exact = std::acos(std::clamp(ps.dot(fine.position(v)), -1.0, 1.0));
        worst_abs = std::max(worst_abs, std::abs(d2[v] - exact));
        if (exact < 1.0) continue;
        worst_far = std::max(worst_far, std::abs(d2[v] - exact) / exact);
    }
    CHECK(worst_far < 0.02);
    CHECK(worst_abs < 3.0 * (kPi / 256));
}

TEST_CASE("flat disk radius check is a pure geometry diagnostic") {
    const auto surf = DiscreteSurface::flat_disk(1.0, 1.0 / 64);
    const auto rep = radius_check(surf, 3.0);
    CHECK(rep.intrinsic_radius == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("stability certificates") {
    const auto one = CurvatureField::constant(1.0);

    // Any solved graph is stable with the vertical normal component.
    const auto sol = solve_cap(0.5, 1.0 / 24);
    const auto surf = DiscreteSurface::from_graph(sol);
    const auto cert = stability_certificate(surf, one);
    CHECK(cert.verdict == Certificate::Stable);
    CHECK(cert.axis.dot(Vec3::UnitZ()) == doctest::Approx(1.0));
    CHECK(cert.min_witness_value > 0);

    // Closed spheres are never stable.
    const auto sphere = DiscreteSurface::round_sphere(1.0, 48, 48);
    const auto cert2 = stability_certificate(sphere, one);
    CHECK(cert2.verdict == Certificate::Unstable);
    CHECK(cert2.lambda0 == doctest::Approx(-2.0).epsilon(0.02));

    // Small flat patch with a generic field: stable.
    const auto patch = DiscreteSurface::flat_disk(0.2, 1.0 / 96);
    const auto generic = CurvatureField::zonal({0.8, 0.2, 0.1}, Vec3(1, 2, 2).normalized());
    const auto cert3 = stability_certificate(patch, generic);
    CHECK(cert3.verdict == Certificate::Stable);
}

TEST_CASE("flux integrals on closed surfaces") {
    const auto sphere = DiscreteSurface::round_sphere(1.0, 96, 96);
    const auto one = CurvatureField::constant(1.0);
    const double area = sphere.total_area();
    CHECK(area == doctest::Approx(4 * kPi).epsilon(1e-3));
    for (const Vec3& v : {Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()), Vec3(Vec3::UnitZ())})
        CHECK(std::abs(flux_integral(sphere, one, v)) < 1e-6 * area);

    // The obstruction signal: H(x) = <x, v> integrates <eta,v>^2 = 4pi/3.
    const auto lin = CurvatureField::linear(1.0, 0.0, Vec3::UnitZ());
    CHECK(flux_integral(sphere, lin, Vec3::UnitZ()) ==
          doctest::Approx(4 * kPi / 3).epsilon(0.005));

    // Rotational quadratic sphere: flux along the axis vanishes.
    RotationalOptions opts;
    opts.ring_rows = 96;
    opts.cols = 96;
    const auto build = build_sphere(ZonalProfile::polynomial({1.0, 0.0, 1.0}), opts);
    const auto zfield = zonal_field(ZonalProfile::polynomial({1.0, 0.0, 1.0}));
    CHECK(std::abs(flux_integral(build.surface, zfield, Vec3::UnitZ())) <
          1e-4 * build.surface.total_area());

    // Open surfaces are rejected.
    const auto hemi = build_hemisphere(ZonalProfile::polynomial({1.0}), {});
    CHECK_THROWS_AS(flux_integral(hemi.surface, one, Vec3::UnitZ()), GeometryError);
}

TEST_CASE("aggregate stability report on the unit sphere") {
    const auto sphere = DiscreteSurface::round_sphere(1.0, 48, 48);
    const auto one = CurvatureField::constant(1.0);
    const auto rep = stability_report(sphere, one, 600);
    CHECK(rep.lambda0 == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(rep.estrella_c == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.radius_bound == doctest::Approx(2 * kPi / 3).epsilon(1e-9));
    CHECK(rep.certificate == Certificate::Unstable);
    CHECK(rep.desiq_margin == doctest::Approx(0.0).epsilon(1e-6));
}
