#include "hsurf/rotational.hpp"

#include <cmath>

#include "hsurf/error.hpp"

namespace hsurf {

CurvatureField zonal_field(const ZonalProfile& zonal) {
    auto h = zonal.h;
    if (!zonal.dh)
        return CurvatureField::analytic([h](const Vec3& x) { return h(x.z()); });
    // Degree-zero extension derivatives via the chain rule through t = z/|y|.
    auto dh = zonal.dh;
    const Vec3 v = Vec3::UnitZ();
    auto fd_second = [h, dh](double t) {
        const double e = 1e-5;
        const double tp = std::min(t + e, 1.0), tm = std::max(t - e, -1.0);
        return (dh(tp) - dh(tm)) / (tp - tm);
    };
    return CurvatureField::analytic(
        [h](const Vec3& x) { return h(x.z()); },
        [dh, v](const Vec3& x) -> Vec3 {
            const double t = x.z();
            return dh(t) * (v - t * x);
        },
        [dh, fd_second, v](const Vec3& x) -> Mat3 {
            const double t = x.z();
            const Vec3 g = v - t * x;
            const Mat3 proj_hess = -(v * x.transpose() + x * v.transpose()) -
                                   t * Mat3::Identity() + 3.0 * t * (x * x.transpose());
            return fd_second(t) * (g * g.transpose()) + dh(t) * proj_hess;
        });
}

double profile_curvature_residual(const ProfileCurve& profile, const ZonalProfile& zonal,
                                  double x_floor) {
    double worst = 0.0;
    for (size_t i = 1; i + 1 < profile.size(); ++i) {
        if (profile.x[i] < x_floor) continue;
        const double ds = profile.s[i + 1] - profile.s[i - 1];
        if (ds <= 0) continue;
        const double kappa_m = (profile.theta[i + 1] - profile.theta[i - 1]) / ds;
        const double kappa_p = std::sin(profile.theta[i]) / profile.x[i];
        const double target = zonal.h(std::cos(profile.theta[i]));
        worst = std::max(worst, std::abs(0.5 * (kappa_m + kappa_p) - target));
    }
    return worst;
}

namespace {

void check_positive(const ZonalProfile& zonal, double t_lo, double t_hi) {
    for (int i = 0; i <= 200; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / 200.0;
        if (!(zonal.h(t) > 0))
            throw GeometryError("zonal profile must be positive on [" +
                                std::to_string(t_lo) + ", " + std::to_string(t_hi) + "]");
    }
}

double evenness_defect(const ZonalProfile& zonal) {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = i / 200.0;
        worst = std::max(worst, std::abs(zonal.h(t) - zonal.h(-t)));
    }
    return worst;
}

void convexity_flags(const ProfileCurve& prof, RotationalBuild& out) {
    out.strictly_convex = true;
    out.gauss_map_monotone = true;
    for (size_t i = 0; i < prof.size(); ++i) {
        if (prof.theta_rate[i] <= 0.0) {
            out.strictly_convex = false;
            out.gauss_map_monotone = false;
        }
        if (prof.x[i] > 1e-12 && std::sin(prof.theta[i]) / prof.x[i] <= 0.0)
            out.strictly_convex = false;
    }
}

} // namespace

RotationalBuild build_sphere(const ZonalProfile& zonal, const RotationalOptions& opts) {
    check_positive(zonal, -1.0, 1.0);
    const double defect = evenness_defect(zonal);
    if (defect > opts.evenness_tol)
        throw GeometryError("zonal profile is not even (defect " +
                            std::to_string(defect) + ")");

    ProfileOptions popts;
    popts.step = opts.step;
    popts.s_max = opts.s_max;
    popts.stop_at_pole = true;
    ProfileCurve prof = integrate_profile(zonal, ProfileStart{}, popts);
    if (!prof.ends_at_pole)
        throw GeometryError("profile failed to close pole-to-pole");
    if (prof.end_pole_angle_error > opts.pole_closure_tol)
        throw GeometryError("pole closure error " +
                            std::to_string(prof.end_pole_angle_error) +
                            " exceeds tolerance");

    RotationalBuild out{
        DiscreteSurface::revolve(prof, zonal, opts.ring_rows, opts.cols, false), prof};
    out.pole_closure_error = prof.end_pole_angle_error;
    out.curvature_residual = profile_curvature_residual(prof, zonal, 20.0 * opts.step);
    convexity_flags(prof, out);

    // Mirror symmetry about the equator crossing (theta = pi/2).
    double s_star = -1.0;
    for (size_t i = 1; i < prof.size(); ++i) {
        if ((prof.theta[i - 1] - kPi / 2) * (prof.theta[i] - kPi / 2) <= 0.0) {
            const double f = (kPi / 2 - prof.theta[i - 1]) /
                             (prof.theta[i] - prof.theta[i - 1]);
            s_star = prof.s[i - 1] + f * (prof.s[i] - prof.s[i - 1]);
            break;
        }
    }
    if (s_star > 0) {
        double xs, zs, ths;
        prof.sample(s_star, xs, zs, ths);
        const double reach = std::min(s_star, prof.total_length() - s_star);
        for (int k = 0; k <= 64; ++k) {
            const double tau = reach * k / 64.0;
            double xa, za, tha, xb, zb, thb;
            prof.sample(s_star - tau, xa, za, tha);
            prof.sample(s_star + tau, xb, zb, thb);
            out.mirror_asymmetry =
                std::max(out.mirror_asymmetry, std::abs(za + zb - 2.0 * zs));
        }
    }
    return out;
}

RotationalBuild build_hemisphere(const ZonalProfile& zonal, const RotationalOptions& opts) {
    check_positive(zonal, 0.0, 1.0);

    ProfileOptions popts;
    popts.step = opts.step;
    popts.s_max = opts.s_max;
    popts.stop_theta = kPi / 2;
    popts.stop_at_pole = false;
    ProfileCurve prof = integrate_profile(zonal, ProfileStart{}, popts);

    const double final_theta = prof.theta.empty() ? 0.0 : prof.theta.back();
    if (std::abs(final_theta - kPi / 2) > 1e-9)
        throw GeometryError("profile never reaches a horizontal normal: not a hemisphere");
    for (size_t i = 0; i < prof.size(); ++i)
        if (prof.theta_rate[i] <= 0.0)
            throw GeometryError("meridian convexity lost before the equator: "
                                "not a hemisphere");

    RotationalBuild out{
        DiscreteSurface::revolve(prof, zonal, opts.ring_rows, opts.cols, true), prof};
    out.curvature_residual = profile_curvature_residual(prof, zonal, 20.0 * opts.step);
    convexity_flags(prof, out);
    out.boundary_radius = prof.x.back();
    out.comparison_radius = 1.0 / (2.0 * zonal.h(0.0));
    return out;
}

} // namespace hsurf
