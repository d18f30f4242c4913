#pragma once

#include "hsurf/curvature_field.hpp"
#include "hsurf/discrete_surface.hpp"
#include "hsurf/profile_curve.hpp"

namespace hsurf {

struct RotationalBuild {
    DiscreteSurface surface;
    ProfileCurve profile;
    /// Max of |H - h(cos theta)| with the meridian curvature recomputed by
    /// differencing theta along the fine profile (away from the poles).
    double curvature_residual = 0.0;
    double pole_closure_error = 0.0;  // |theta_end - pi| residue at the far pole
    double mirror_asymmetry = 0.0;    // even profiles: z antisymmetry defect
    bool strictly_convex = false;     // both principal curvatures positive
    bool gauss_map_monotone = false;  // theta monotone along the profile
    double boundary_radius = 0.0;     // hemispheres: ring radius at theta = pi/2
    double comparison_radius = 0.0;   // hemispheres: 1 / (2 h(0))
};

struct RotationalOptions {
    int ring_rows = 128;
    int cols = 128;
    double step = 1e-3;
    double s_max = 64.0;
    double evenness_tol = 1e-9;
    double pole_closure_tol = 1e-3;
};

/// Closed rotational sphere for an even positive zonal profile.
RotationalBuild build_sphere(const ZonalProfile& zonal, const RotationalOptions& opts = {});

/// Strictly convex cap whose Gauss image is the closed upper hemisphere;
/// the profile is truncated where the normal turns horizontal.
RotationalBuild build_hemisphere(const ZonalProfile& zonal,
                                 const RotationalOptions& opts = {});

/// The curvature function induced on the sphere by a zonal profile,
/// h(<x, e3>), with closed-form derivatives when dh is available.
CurvatureField zonal_field(const ZonalProfile& zonal);

/// Meridian-curvature consistency of a profile: recompute the turning rate
/// by centered differences and compare 0.5*(kappa_m + kappa_p) with
/// h(cos theta).  Samples with x < x_floor are skipped.
double profile_curvature_residual(const ProfileCurve& profile, const ZonalProfile& zonal,
                                  double x_floor);

} // namespace hsurf
