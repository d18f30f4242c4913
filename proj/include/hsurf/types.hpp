#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hsurf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Orthonormal tangent frame at a point of the unit sphere.
/// t1 = normalize(e3 x x) when |<x,e3>| < 0.9, else normalize(e1 x x),
/// and t2 = x x t1.  Deterministic so Hessian matrices are reproducible.
struct TangentFrame {
    Vec3 t1;
    Vec3 t2;
};

TangentFrame tangent_frame(const Vec3& x);

/// Normalizes x, rejecting vectors too far from the unit sphere.
Vec3 to_unit(const Vec3& x);

} // namespace hsurf
