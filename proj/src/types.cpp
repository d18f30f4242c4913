#include "hsurf/types.hpp"

#include <cmath>

#include "hsurf/error.hpp"

namespace hsurf {

TangentFrame tangent_frame(const Vec3& x) {
    Vec3 pivot = std::abs(x.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    Vec3 t1 = pivot.cross(x).normalized();
    Vec3 t2 = x.cross(t1);
    return {t1, t2};
}

Vec3 to_unit(const Vec3& x) {
    const double n = x.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6)
        throw EvaluationError("point is not on the unit sphere (|x| = " +
                              std::to_string(n) + ")");
    return x / n;
}

} // namespace hsurf
