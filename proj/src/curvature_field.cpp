#include "hsurf/curvature_field.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "hsurf/error.hpp"

namespace hsurf {

using nlohmann::json;

namespace {

// Gradient and Hessian of the degree-zero extension of t(x) = <x,v> at |x|=1.
Vec3 axis_projection_gradient(const Vec3& x, const Vec3& v) {
    return v - x.dot(v) * x;
}

Mat3 axis_projection_hessian(const Vec3& x, const Vec3& v) {
    const double t = x.dot(v);
    return -(v * x.transpose() + x * v.transpose()) - t * Mat3::Identity() +
           3.0 * t * (x * x.transpose());
}

double checked(double value, const char* what) {
    if (!std::isfinite(value))
        throw EvaluationError(std::string("non-finite curvature value in ") + what);
    return value;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

Vec3 axis_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(where + ": axis must be a 3-vector");
    Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
    const double n = v.norm();
    if (n < 1e-12) throw ConfigError(where + ": zero axis");
    return v / n;
}

} // namespace

Mat3 SymmetryTag::isometry(double rotation_angle) const {
    switch (kind) {
        case Kind::Reflection:
            return Mat3::Identity() - 2.0 * (axis * axis.transpose());
        case Kind::Rotation:
            return Eigen::AngleAxisd(rotation_angle, axis).toRotationMatrix();
        case Kind::AntipodalEven:
            return -Mat3::Identity();
    }
    return Mat3::Identity();
}

CurvatureField CurvatureField::constant(double h0) {
    CurvatureField f;
    f.eval_ = [h0](const Vec3&) { return h0; };
    f.grad_ = [](const Vec3&) { return Vec3::Zero(); };
    f.hess_ = [](const Vec3&) { return Mat3::Zero(); };
    f.mode_ = DerivativeMode::Analytic;
    f.description_ = "constant";
    return f;
}

CurvatureField CurvatureField::linear(double a, double b, const Vec3& axis) {
    const Vec3 v = axis.normalized();
    CurvatureField f;
    f.eval_ = [a, b, v](const Vec3& x) { return a * x.dot(v) + b; };
    f.grad_ = [a, v](const Vec3& x) -> Vec3 { return a * axis_projection_gradient(x, v); };
    f.hess_ = [a, v](const Vec3& x) -> Mat3 { return a * axis_projection_hessian(x, v); };
    f.mode_ = DerivativeMode::Analytic;
    f.description_ = "linear";
    return f;
}

CurvatureField CurvatureField::zonal(std::vector<double> coeffs, const Vec3& axis) {
    if (coeffs.empty()) throw ConfigError("zonal field needs at least one coefficient");
    const Vec3 v = axis.normalized();
    auto p = [coeffs](double t) {
        double acc = 0.0;
        for (size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
        return acc;
    };
    auto dp = [coeffs](double t) {
        double acc = 0.0;
        for (size_t k = coeffs.size(); k-- > 1;) acc = acc * t + double(k) * coeffs[k];
        return acc;
    };
    auto ddp = [coeffs](double t) {
        double acc = 0.0;
        for (size_t k = coeffs.size(); k-- > 2;)
            acc = acc * t + double(k) * double(k - 1) * coeffs[k];
        return acc;
    };
    CurvatureField f;
    f.eval_ = [p, v](const Vec3& x) { return p(x.dot(v)); };
    f.grad_ = [dp, v](const Vec3& x) -> Vec3 {
        return dp(x.dot(v)) * axis_projection_gradient(x, v);
    };
    f.hess_ = [dp, ddp, v](const Vec3& x) -> Mat3 {
        const Vec3 g = axis_projection_gradient(x, v);
        const double t = x.dot(v);
        return ddp(t) * (g * g.transpose()) + dp(t) * axis_projection_hessian(x, v);
    };
    f.mode_ = DerivativeMode::Analytic;
    f.description_ = "zonal-poly";
    return f;
}

CurvatureField CurvatureField::analytic(EvalFn f, double fd_step) {
    if (fd_step <= 0) throw ConfigError("fd_step must be positive");
    CurvatureField out;
    out.eval_ = std::move(f);
    out.mode_ = DerivativeMode::FiniteDifference;
    out.fd_step_ = fd_step;
    return out;
}

CurvatureField CurvatureField::analytic(EvalFn f, GradFn grad, HessFn hess) {
    CurvatureField out;
    out.eval_ = std::move(f);
    out.grad_ = std::move(grad);
    out.hess_ = std::move(hess);
    out.mode_ = DerivativeMode::Analytic;
    return out;
}

CurvatureField CurvatureField::sampled(int nlat, int nlon, std::vector<double> values,
                                       double fd_step) {
    if (nlat < 4 || nlon < 4)
        throw ConfigError("sampled field grid must be at least 4x4");
    if (values.size() != size_t(nlat) * size_t(nlon))
        throw ConfigError("sampled field: values size does not match nlat*nlon");

    auto data = std::make_shared<std::vector<double>>(std::move(values));
    const int rows = nlat, cols = nlon;

    // Row i holds colatitude theta_i = i*pi/(nlat-1); columns wrap in phi.
    // Reads past the poles wrap antipodally: f(-theta, phi) = f(theta, phi+pi).
    auto at = [data, rows, cols](int i, int j) {
        int jj = ((j % cols) + cols) % cols;
        if (i < 0) {
            i = -i;
            jj = (jj + cols / 2) % cols;
        } else if (i >= rows) {
            i = 2 * (rows - 1) - i;
            jj = (jj + cols / 2) % cols;
        }
        return (*data)[size_t(i) * cols + jj];
    };
    auto catmull = [](double fm1, double f0, double f1, double f2, double u) {
        return f0 + 0.5 * u * (f1 - fm1 +
               u * (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2 +
               u * (3.0 * (f0 - f1) + f2 - fm1)));
    };

    CurvatureField out;
    out.eval_ = [at, catmull, rows, cols](const Vec3& x) {
        const double theta = std::acos(std::clamp(x.z(), -1.0, 1.0));
        double phi = std::atan2(x.y(), x.x());
        if (phi < 0) phi += 2.0 * kPi;
        const double fi = theta / kPi * (rows - 1);
        const double fj = phi / (2.0 * kPi) * cols;
        const int i0 = int(std::floor(fi));
        const int j0 = int(std::floor(fj));
        const double u = fi - i0, v = fj - j0;
        double col[4];
        for (int di = -1; di <= 2; ++di)
            col[di + 1] = catmull(at(i0 + di, j0 - 1), at(i0 + di, j0),
                                  at(i0 + di, j0 + 1), at(i0 + di, j0 + 2), v);
        return catmull(col[0], col[1], col[2], col[3], u);
    };
    out.mode_ = DerivativeMode::FiniteDifference;
    out.fd_step_ = fd_step;
    out.description_ = "sampled";
    return out;
}

double CurvatureField::raw_eval(const Vec3& unit_x) const {
    return checked(eval_(unit_x), "eval");
}

double CurvatureField::eval(const Vec3& x) const { return raw_eval(to_unit(x)); }

Vec3 CurvatureField::euclidean_gradient(const Vec3& x) const {
    if (mode_ == DerivativeMode::Analytic) return grad_(x);
    const double h = fd_step_;
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        Vec3 dp = x, dm = x;
        dp[i] += h;
        dm[i] -= h;
        g[i] = (raw_eval(dp.normalized()) - raw_eval(dm.normalized())) / (2.0 * h);
    }
    return g;
}

Mat3 CurvatureField::euclidean_hessian(const Vec3& x) const {
    if (mode_ == DerivativeMode::Analytic) return hess_(x);
    const double h = fd_step_;
    auto f = [this](const Vec3& y) { return raw_eval(y.normalized()); };
    const double f0 = f(x);
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        Vec3 dp = x, dm = x;
        dp[i] += h;
        dm[i] -= h;
        m(i, i) = (f(dp) - 2.0 * f0 + f(dm)) / (h * h);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec3 pp = x, pm = x, mp = x, mm = x;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            m(i, j) = m(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
        }
    return m;
}

Vec3 CurvatureField::gradient(const Vec3& x) const {
    const Vec3 p = to_unit(x);
    const Vec3 g = euclidean_gradient(p);
    return g - p.dot(g) * p; // tangential projection
}

Mat2 CurvatureField::hessian_in_frame(const Vec3& x, const Vec3& t1,
                                      const Vec3& t2) const {
    const Vec3 p = to_unit(x);
    const Mat3 H = euclidean_hessian(p);
    const double radial = p.dot(euclidean_gradient(p)); // ~0 for the extension
    Mat2 m;
    m(0, 0) = t1.dot(H * t1) - radial;
    m(1, 1) = t2.dot(H * t2) - radial;
    m(0, 1) = m(1, 0) = 0.5 * (t1.dot(H * t2) + t2.dot(H * t1));
    return m;
}

Mat2 CurvatureField::hessian(const Vec3& x) const {
    const Vec3 p = to_unit(x);
    const auto frame = tangent_frame(p);
    return hessian_in_frame(p, frame.t1, frame.t2);
}

double CurvatureField::hessian_form(const Vec3& x, const Vec3& u, const Vec3& v) const {
    const Vec3 p = to_unit(x);
    const Mat3 H = euclidean_hessian(p);
    const double radial = p.dot(euclidean_gradient(p));
    return u.dot(H * v) - u.dot(v) * radial;
}

double CurvatureField::laplacian(const Vec3& x) const {
    const Mat2 h = hessian(x);
    return h(0, 0) + h(1, 1);
}

CurvatureField CurvatureField::with_finite_differences(double fd_step) const {
    CurvatureField out = *this;
    out.grad_ = nullptr;
    out.hess_ = nullptr;
    out.mode_ = DerivativeMode::FiniteDifference;
    out.fd_step_ = fd_step;
    return out;
}

void CurvatureField::declare_symmetries(std::vector<SymmetryTag> tags, double tol) {
    for (const auto& tag : tags) {
        double worst = 0.0;
        if (tag.kind == SymmetryTag::Kind::Rotation) {
            for (double angle : {0.37, 1.0, 2.41})
                worst = std::max(worst, symmetry_residual(*this, tag.isometry(angle)));
        } else {
            worst = symmetry_residual(*this, tag.isometry());
        }
        if (worst > tol)
            throw ConfigError("declared symmetry fails numerically (residual " +
                              std::to_string(worst) + ")");
    }
    tags_ = std::move(tags);
}

CurvatureField CurvatureField::from_json(const json& spec) {
    if (!spec.is_object()) throw ConfigError("field spec must be a JSON object");
    reject_unknown_keys(spec,
                        {"kind", "formula", "params", "derivative_mode", "fd_step",
                         "symmetry_tags", "grid"},
                        "field spec");
    const std::string kind = spec.value("kind", "analytic");

    CurvatureField out;
    if (kind == "analytic") {
        const std::string formula = spec.at("formula").get<std::string>();
        const json params = spec.value("params", json::object());
        if (formula == "constant") {
            reject_unknown_keys(params, {"H0"}, "constant params");
            out = constant(params.at("H0").get<double>());
        } else if (formula == "linear") {
            reject_unknown_keys(params, {"a", "b", "axis"}, "linear params");
            out = linear(params.at("a").get<double>(), params.at("b").get<double>(),
                         axis_from_json(params.at("axis"), "linear"));
        } else if (formula == "zonal-poly") {
            reject_unknown_keys(params, {"coeffs", "axis"}, "zonal-poly params");
            out = zonal(params.at("coeffs").get<std::vector<double>>(),
                        axis_from_json(params.at("axis"), "zonal-poly"));
        } else {
            throw ConfigError("unknown formula id '" + formula + "'");
        }
    } else if (kind == "sampled") {
        const json& grid = spec.at("grid");
        reject_unknown_keys(grid, {"nlat", "nlon", "values"}, "sampled grid");
        out = sampled(grid.at("nlat").get<int>(), grid.at("nlon").get<int>(),
                      grid.at("values").get<std::vector<double>>());
    } else {
        throw ConfigError("field kind must be 'analytic' or 'sampled'");
    }

    if (spec.contains("fd_step")) out.fd_step_ = spec.at("fd_step").get<double>();
    if (spec.value("derivative_mode", "") == "fd")
        out = out.with_finite_differences(out.fd_step_);

    if (spec.contains("symmetry_tags")) {
        std::vector<SymmetryTag> tags;
        for (const auto& t : spec.at("symmetry_tags")) {
            reject_unknown_keys(t, {"kind", "axis"}, "symmetry tag");
            SymmetryTag tag;
            const std::string k = t.at("kind").get<std::string>();
            if (k == "reflection") tag.kind = SymmetryTag::Kind::Reflection;
            else if (k == "rotation") tag.kind = SymmetryTag::Kind::Rotation;
            else if (k == "antipodal-even") tag.kind = SymmetryTag::Kind::AntipodalEven;
            else throw ConfigError("unknown symmetry kind '" + k + "'");
            if (t.contains("axis")) tag.axis = axis_from_json(t.at("axis"), "symmetry tag");
            tags.push_back(tag);
        }
        out.declare_symmetries(std::move(tags));
    }
    out.spec_ = std::make_shared<const json>(spec);
    return out;
}

nlohmann::json CurvatureField::to_json() const {
    if (spec_) return *spec_;
    json j;
    j["kind"] = description_ == "sampled" ? "sampled" : "analytic";
    j["formula"] = description_;
    return j;
}

std::vector<Vec3> fibonacci_sphere(int count) {
    if (count < 1) throw ConfigError("lattice needs at least one point");
    std::vector<Vec3> pts;
    pts.reserve(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

double estrella_value(const CurvatureField& field, const Vec3& x) {
    const Vec3 p = to_unit(x);
    const double h = field.eval(p);
    const Vec3 g = field.gradient(p);
    const Mat2 hess = field.hessian(p);
    const double lap = hess(0, 0) + hess(1, 1);
    const double det = hess(0, 0) * hess(1, 1) - hess(0, 1) * hess(1, 0);
    return 3.0 * h * h + det + h * lap - g.squaredNorm() - 0.25 * lap * lap;
}

EstrellaReport estrella_constant(const CurvatureField& field, int resolution) {
    if (resolution < 8) throw ConfigError("estrella resolution must be >= 8");
    EstrellaReport report;
    report.grid_resolution = resolution;
    const auto pts = fibonacci_sphere(resolution);
    report.values.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i)
        report.values[i] = estrella_value(field, pts[i]);
    size_t best = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (report.values[i] < report.values[best]) best = i;
    report.min_value = report.values[best];
    report.argmin = pts[best];
    return report;
}

Vec2 closure_integral(const CurvatureField& field, const Vec3& e1, const Vec3& e2,
                      int nodes) {
    if (nodes < 8) throw ConfigError("closure quadrature needs >= 8 nodes");
    if (std::abs(e1.norm() - 1.0) > 1e-10 || std::abs(e2.norm() - 1.0) > 1e-10 ||
        std::abs(e1.dot(e2)) > 1e-10)
        throw ConfigError("plane basis must be orthonormal");
    if (nodes % 2 != 0) ++nodes; // composite Simpson needs an even panel count

    auto point = [&](double theta) { return std::cos(theta) * e1 + std::sin(theta) * e2; };

    // Vanishing-denominator guard: this is the straight-line regime.
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes; ++i)
        min_abs = std::min(min_abs, std::abs(field.eval(point(2.0 * kPi * i / nodes))));
    if (min_abs < 1e-9)
        throw EvaluationError("curvature function vanishes on the great circle");

    const double step = 2.0 * kPi / nodes;
    Vec2 acc = Vec2::Zero();
    for (int i = 0; i < nodes; ++i) {
        // Simpson weights on the periodic interval: 2/3 at panel ends, 4/3 at midpoints.
        const double theta = i * step;
        const double w = (i % 2 == 0) ? 2.0 / 3.0 : 4.0 / 3.0;
        const Vec3 xi = point(theta);
        acc += w * Vec2(std::cos(theta), std::sin(theta)) / field.eval(xi);
    }
    return acc * step;
}

double symmetry_residual(const CurvatureField& field, const Mat3& isometry,
                         int resolution) {
    if ((isometry.transpose() * isometry - Mat3::Identity()).norm() > 1e-10)
        throw ConfigError("symmetry matrix is not orthogonal");
    double worst = 0.0;
    for (const Vec3& x : fibonacci_sphere(resolution))
        worst = std::max(worst, std::abs(field.eval(isometry * x) - field.eval(x)));
    return worst;
}

PositivityRange positivity_range(const CurvatureField& field, int resolution,
                                 const Vec3& e1, const Vec3& e2) {
    PositivityRange out;
    out.min_value = std::numeric_limits<double>::infinity();
    out.max_value = -std::numeric_limits<double>::infinity();
    for (const Vec3& x : fibonacci_sphere(resolution)) {
        const double v = field.eval(x);
        out.min_value = std::min(out.min_value, v);
        out.max_value = std::max(out.max_value, v);
    }
    out.min_on_circle = std::numeric_limits<double>::infinity();
    const int n = std::max(resolution, 360);
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * kPi * i / n;
        const Vec3 xi = std::cos(theta) * e1 + std::sin(theta) * e2;
        out.min_on_circle = std::min(out.min_on_circle, field.eval(xi));
    }
    out.item5_margin = 2.0 * out.min_on_circle - out.max_value;
    out.item5_holds = out.item5_margin > 0.0;
    return out;
}

} // namespace hsurf
