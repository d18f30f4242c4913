#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hsurf/types.hpp"

namespace hsurf {

/// 1-D zonal profile of a rotationally symmetric curvature function,
/// h(t) for t = <eta, axis> in [-1, 1].
struct ZonalProfile {
    std::function<double(double)> h;
    std::function<double(double)> dh; // optional, for diagnostics

    static ZonalProfile polynomial(const std::vector<double>& coeffs);
};

/// Meridian of a surface of revolution with prescribed curvature:
/// x' = cos(theta), z' = sin(theta), theta' = 2 h(cos theta) - sin(theta)/x,
/// arclength parametrized, x >= 0 the distance to the axis.  Regular pole
/// touches have theta' -> h(+-1).
struct ProfileCurve {
    std::vector<double> s;
    std::vector<double> x;
    std::vector<double> z;
    std::vector<double> theta;
    std::vector<double> theta_rate; // ODE right-hand side along the curve

    bool starts_at_pole = false;
    bool ends_at_pole = false;      // reached theta ~ pi with x -> 0
    double end_pole_angle_error = 0.0; // |theta_end - pi| when ends_at_pole
    double step = 0.0;

    size_t size() const { return s.size(); }
    /// Interpolates the state at arclength value sq (cubic Hermite with
    /// exact slopes from the ODE).
    void sample(double sq, double& xo, double& zo, double& thetao) const;
    double total_length() const { return s.empty() ? 0.0 : s.back(); }
};

struct ProfileStart {
    bool at_pole = true;  // series start on the axis
    double x0 = 0.0, z0 = 0.0, theta0 = 0.0; // used when at_pole = false
};

struct ProfileOptions {
    double step = 1e-3;
    double s_max = 20.0;
    /// Stop integrating when theta crosses this value (monotone profiles);
    /// NaN disables the cutoff.
    double stop_theta = std::numeric_limits<double>::quiet_NaN();
    bool stop_at_pole = true;  // stop when the profile returns to the axis
};

/// RK4 shooting of the profile equation with a series start near the pole
/// (x = s - h(1)^2 s^3/6, theta = h(1) s, truncated at cubic order).
/// Throws GeometryError on axis collision with sin(theta) away from zero.
ProfileCurve integrate_profile(const ZonalProfile& zonal, const ProfileStart& start,
                               const ProfileOptions& opts = {});

} // namespace hsurf
