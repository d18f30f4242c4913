#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsurf/types.hpp"

namespace hsurf {

enum class DerivativeMode { Analytic, FiniteDifference };

/// Declared invariance of a curvature function, validated numerically
/// against samples when the field is constructed.
struct SymmetryTag {
    enum class Kind { Reflection, Rotation, AntipodalEven };
    Kind kind = Kind::AntipodalEven;
    Vec3 axis = Vec3::UnitZ(); // reflection plane normal / rotation axis

    Mat3 isometry(double rotation_angle = 1.0) const;
};

/// Prescribed curvature function H on the unit sphere together with its
/// first and second spherical derivatives.
///
/// Derivatives are taken through the degree-zero homogeneous extension
/// H~(y) = H(y/|y|): the spherical gradient is the (tangentially
/// projected) Euclidean gradient of H~, and the spherical Hessian in an
/// orthonormal tangent frame {t1,t2} is ti' D^2H~ tj - delta_ij <x, DH~>.
/// This avoids chart singularities at the poles.  Closed-form extensions
/// are used for the built-in formulas; otherwise central differences
/// with step fd_step.
class CurvatureField {
public:
    using EvalFn = std::function<double(const Vec3&)>;
    using GradFn = std::function<Vec3(const Vec3&)>;
    using HessFn = std::function<Mat3(const Vec3&)>;

    static CurvatureField constant(double h0);
    /// a<x,axis> + b
    static CurvatureField linear(double a, double b, const Vec3& axis);
    /// sum_k coeffs[k] * <x,axis>^k
    static CurvatureField zonal(std::vector<double> coeffs, const Vec3& axis);
    /// Arbitrary evaluator; derivatives by central differences.
    static CurvatureField analytic(EvalFn f, double fd_step = 1e-4);
    /// Arbitrary evaluator with closed-form extension derivatives.
    static CurvatureField analytic(EvalFn f, GradFn grad, HessFn hess);
    /// Values on an inclusive lat-long grid (nlat rows from north to
    /// south pole, nlon periodic columns), Catmull-Rom interpolated.
    static CurvatureField sampled(int nlat, int nlon, std::vector<double> values,
                                  double fd_step = 1e-4);

    static CurvatureField from_json(const nlohmann::json& spec);
    nlohmann::json to_json() const;

    /// H(x).  x is normalized first; |x| may deviate from 1 by at most 1e-6.
    double eval(const Vec3& x) const;

    /// Intrinsic spherical gradient at x (tangent: <grad, x> = 0).
    Vec3 gradient(const Vec3& x) const;

    /// Spherical Hessian in the deterministic tangent frame at x.
    Mat2 hessian(const Vec3& x) const;
    Mat2 hessian_in_frame(const Vec3& x, const Vec3& t1, const Vec3& t2) const;
    /// Hessian as a bilinear form on tangent vectors u, v at x.
    double hessian_form(const Vec3& x, const Vec3& u, const Vec3& v) const;

    /// Spherical Laplacian (trace of the Hessian).
    double laplacian(const Vec3& x) const;

    DerivativeMode derivative_mode() const { return mode_; }
    bool has_analytic_derivatives() const { return mode_ == DerivativeMode::Analytic; }
    /// Force finite-difference derivatives (cross-check path).
    CurvatureField with_finite_differences(double fd_step = 1e-4) const;

    double fd_step() const { return fd_step_; }
    const std::vector<SymmetryTag>& symmetry_tags() const { return tags_; }
    /// Validates and attaches tags; throws ConfigError if a declared
    /// invariance fails numerically.
    void declare_symmetries(std::vector<SymmetryTag> tags, double tol = 1e-7);

    const std::string& description() const { return description_; }

private:
    CurvatureField() = default;

    Vec3 euclidean_gradient(const Vec3& x) const;
    Mat3 euclidean_hessian(const Vec3& x) const;
    double raw_eval(const Vec3& unit_x) const;

    EvalFn eval_;
    GradFn grad_;   // extension gradient at |x|=1 (analytic mode)
    HessFn hess_;   // extension Hessian at |x|=1 (analytic mode)
    DerivativeMode mode_ = DerivativeMode::FiniteDifference;
    double fd_step_ = 1e-4;
    std::vector<SymmetryTag> tags_;
    std::string description_ = "analytic";
    std::shared_ptr<const nlohmann::json> spec_; // original JSON, if any
};

/// Quasi-uniform Fibonacci lattice on the unit sphere.
std::vector<Vec3> fibonacci_sphere(int count);

struct EstrellaReport {
    double min_value = 0.0;
    Vec3 argmin = Vec3::UnitZ();
    int grid_resolution = 0;
    std::vector<double> values; // per lattice sample
    bool certified(double c) const { return min_value >= c && c > 0.0; }
};

/// 3H^2 + det(Hess_S H) + H Lap_S H - |Grad_S H|^2 - (Lap_S H)^2 / 4 at x.
double estrella_value(const CurvatureField& field, const Vec3& x);

/// Minimum of estrella_value over a Fibonacci lattice (resolution = point
/// count, at least 8).
EstrellaReport estrella_constant(const CurvatureField& field, int resolution);

/// Quadrature of the circle integral of xi / H(xi) over the great circle
/// spanned by the orthonormal pair (e1, e2), expressed in that basis.
/// Composite Simpson; throws EvaluationError if H vanishes on the circle.
Vec2 closure_integral(const CurvatureField& field, const Vec3& e1, const Vec3& e2,
                      int nodes = 720);

/// max over samples of |H(Phi x) - H(x)| for an orthogonal Phi.
double symmetry_residual(const CurvatureField& field, const Mat3& isometry,
                         int resolution = 2000);

struct PositivityRange {
    double min_value = 0.0;
    double max_value = 0.0;
    double min_on_circle = 0.0; // over the great circle span(e1,e2)
    bool item5_holds = false;   // max H < 2 min H|_circle
    double item5_margin = 0.0;  // 2 min H|_circle - max H
};

PositivityRange positivity_range(const CurvatureField& field, int resolution,
                                 const Vec3& e1, const Vec3& e2);

} // namespace hsurf
