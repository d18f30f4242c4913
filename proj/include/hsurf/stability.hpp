#pragma once

#include <string>
#include <vector>

#include "hsurf/curvature_field.hpp"
#include "hsurf/discrete_surface.hpp"

namespace hsurf {

/// Discrete stability operator L f = Lap f + <X_H, grad f> + |sigma|^2 f
/// with X_H = 2 grad_S H(eta), assembled over all vertices with identity
/// rows at Dirichlet boundary vertices.
///
/// Graphs use a conservative 9-point metric stencil; revolved grids use
/// moving-least-squares stencils in per-vertex tangent coordinates
/// (degree-4 fits), which keep the pointwise truncation second order
/// through the poles.
struct StabilityOperator {
    SparseMat matrix;
    std::vector<Vec3> advection;   // X_H per vertex
    std::vector<double> potential; // |sigma|^2 per vertex
    const DiscreteSurface* surface = nullptr;

    /// Gradient stencils packed per vertex (tangent components), reused by
    /// the discrete divergence.
    SparseMat grad_t1, grad_t2;
};

StabilityOperator assemble_stability_operator(const DiscreteSurface& surface,
                                              const CurvatureField& field);

/// max over interior vertices of |L nu| for nu = <eta, axis>.
double jacobi_residual(const StabilityOperator& op, const Vec3& axis);
double jacobi_residual(const DiscreteSurface& surface, const CurvatureField& field,
                       const Vec3& axis);

struct EigenResult {
    double lambda0 = 0.0;
    VecX psi;                   // full vertex vector, zero on the boundary
    bool converged = false;
    bool sign_definite = false;
    int iterations = 0;
    double residual = 0.0;      // |(-L - lambda) psi|_2 / |psi|_2
    std::string status;         // converged | indeterminate
};

/// Principal eigenvalue of -L (Dirichlet on the boundary set, whole vertex
/// set when closed) by shift-inverted power iteration with real shifts
/// scanned from below; acceptance requires a sign-definite eigenvector.
EigenResult principal_eigenvalue(const StabilityOperator& op);

/// Discrete divergence of a tangential vertex field.
std::vector<double> divergence(const StabilityOperator& op, const std::vector<Vec3>& x);

/// Pointwise Q = q - div(X)/2 - |X|^2/4 (boundary entries copy q).
std::vector<double> schrodinger_transform(const StabilityOperator& op,
                                          const std::vector<double>& q,
                                          const std::vector<Vec3>& x);

/// Q_H from the divergence route: |sigma|^2 - div(X_H)/2 - |X_H|^2/4.
std::vector<double> q_transform(const StabilityOperator& op, const CurvatureField& field);
/// Q_H from the expanded route: 4H^2 - 2K - |grad_S H|^2 + k1 a1 + k2 a2
/// with a_i the spherical Hessian in the principal directions.
std::vector<double> q_expanded(const DiscreteSurface& surface, const CurvatureField& field);

struct MarginReport {
    double min_margin = 0.0; // min over interior of Q_H + K - c
    int argmin = -1;
    int failing = 0;         // vertices with negative margin
};

/// Pointwise check of Q_H >= -K + c; requires c > 0.
MarginReport desi_q_check(const DiscreteSurface& surface, const CurvatureField& field,
                          double c);

struct RadiusReport {
    double intrinsic_radius = 0.0;
    double bound = 0.0;      // 2 pi / sqrt(3 c)
    bool pass = false;
};

/// Compares the intrinsic radius (geodesic distance to the boundary) with
/// the stable-surface bound for the constant c.
RadiusReport radius_check(const DiscreteSurface& surface, double c);

enum class Certificate { Stable, Unstable, Indeterminate };

struct CertificateReport {
    Certificate verdict = Certificate::Indeterminate;
    std::string witness;     // "nu(axis)" or "principal eigenfunction"
    Vec3 axis = Vec3::Zero();
    double lambda0 = std::numeric_limits<double>::quiet_NaN();
    double min_witness_value = 0.0;
};

/// Looks for a positive function u with L u <= 0: first the normal
/// components nu = <eta, a> over sampled axes, then the principal
/// eigenfunction.  Indeterminate is a valid outcome.
CertificateReport stability_certificate(const DiscreteSurface& surface,
                                        const CurvatureField& field);

/// Quadrature of <eta, v> H(eta) over a closed surface.
double flux_integral(const DiscreteSurface& surface, const CurvatureField& field,
                     const Vec3& v);

struct StabilityReport {
    double lambda0 = std::numeric_limits<double>::quiet_NaN();
    std::string eigen_status;
    bool eigenfunction_sign_definite = false;
    double jacobi_residuals[3] = {0, 0, 0}; // axes e1, e2, e3
    double estrella_c = 0.0;
    Vec3 estrella_argmin = Vec3::Zero();
    double radius_bound = std::numeric_limits<double>::infinity();
    double intrinsic_radius = std::numeric_limits<double>::quiet_NaN();
    double desiq_margin = std::numeric_limits<double>::quiet_NaN();
    Certificate certificate = Certificate::Indeterminate;
    std::string certificate_witness;
};

StabilityReport stability_report(const DiscreteSurface& surface,
                                 const CurvatureField& field,
                                 int estrella_resolution = 2000);

} // namespace hsurf
