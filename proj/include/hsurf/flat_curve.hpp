#pragma once

#include <optional>
#include <vector>

#include "hsurf/curvature_field.hpp"
#include "hsurf/types.hpp"

namespace hsurf {

/// Arclength-parametrized planar generating curve of a flat cylinder,
/// obtained by integrating theta'(s) = n Hhat(theta) with n = 2 and
/// Hhat(theta) = H(-sin(theta) e1 + cos(theta) e2).
struct PlanarCurveSolution {
    std::vector<double> s;      // arclength samples
    std::vector<double> theta;  // turning angle
    std::vector<Vec2> points;   // alpha(s) in the (e1, e2) basis
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();
    bool straight_line = false; // Hhat(theta0) = 0 regime
    bool closed = false;
    double closure_gap = std::numeric_limits<double>::infinity();
    std::optional<double> period; // arclength of one closed loop
    double step = 0.0;

    const Vec2& point(size_t i) const { return points[i]; }
    /// 3D unit normal of the cylinder along the curve.
    Vec3 normal3(size_t i) const {
        return -std::sin(theta[i]) * e1 + std::cos(theta[i]) * e2;
    }
};

struct FlatCurveOptions {
    double theta0 = 0.0;
    double s_max = 2.0 * kPi;
    double step = 1e-3;          // capped at 1e-3 / max|Hhat| when cap_step
    bool cap_step = true;        // disable for step-refinement studies
    double closure_tol = 1e-6;   // length units
    double freeze_tol = 1e-10;   // |Hhat| below this freezes theta
};

/// RK4 integration of the turning-angle equation; alpha(0) = 0.
PlanarCurveSolution integrate_flat_curve(const CurvatureField& field,
                                         const Vec3& e1, const Vec3& e2,
                                         const FlatCurveOptions& opts = {});

struct ClosureResult {
    bool closed = false;
    double gap = std::numeric_limits<double>::infinity();
    double integral_norm = 0.0; // |circle integral of xi / H|
    bool criteria_agree = true; // integral test vs geometric gap
};

/// Closure test: the curve closes iff H is nonvanishing on the great
/// circle and the circle integral of xi/H vanishes; the geometric gap
/// after one turning-angle period must agree.
ClosureResult detect_closure(const PlanarCurveSolution& sol, const CurvatureField& field,
                             double integral_tol = 1e-6);

} // namespace hsurf
