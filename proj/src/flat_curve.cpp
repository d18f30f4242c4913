#include "hsurf/flat_curve.hpp"

#include <cmath>

#include "hsurf/error.hpp"

namespace hsurf {

namespace {

struct State {
    double theta;
    Vec2 alpha;
};

} // namespace

PlanarCurveSolution integrate_flat_curve(const CurvatureField& field,
                                         const Vec3& e1, const Vec3& e2,
                                         const FlatCurveOptions& opts) {
    if (opts.s_max <= 0) throw ConfigError("s_max must be positive");
    if (std::abs(e1.norm() - 1.0) > 1e-10 || std::abs(e2.norm() - 1.0) > 1e-10 ||
        std::abs(e1.dot(e2)) > 1e-10)
        throw ConfigError("plane basis must be orthonormal");

    PlanarCurveSolution sol;
    sol.e1 = e1;
    sol.e2 = e2;

    auto hhat = [&](double theta) {
        return field.eval(-std::sin(theta) * e1 + std::cos(theta) * e2);
    };
    auto theta_rate = [&](double theta) {
        const double h = hhat(theta);
        return std::abs(h) < opts.freeze_tol ? 0.0 : 2.0 * h;
    };

    if (std::abs(hhat(opts.theta0)) < opts.freeze_tol) {
        // Straight line through the origin with direction (cos, sin)(theta0):
        // the cylinder over it is a hyperplane.
        sol.straight_line = true;
        const int n = std::max(2, int(std::ceil(opts.s_max / std::max(opts.step, 1e-6))));
        const Vec2 dir(std::cos(opts.theta0), std::sin(opts.theta0));
        for (int i = 0; i <= n; ++i) {
            const double s = opts.s_max * i / n;
            sol.s.push_back(s);
            sol.theta.push_back(opts.theta0);
            sol.points.push_back(s * dir);
        }
        sol.step = opts.s_max / n;
        return sol;
    }

    // Fixed step capped by the turning rate so every loop is resolved.
    double step = opts.step;
    if (opts.cap_step) {
        double max_rate = 0.0;
        for (int i = 0; i < 720; ++i)
            max_rate = std::max(max_rate, std::abs(theta_rate(2.0 * kPi * i / 720)));
        step = std::min(opts.step, 1e-3 / std::max(max_rate / 2.0, 1e-12));
    }
    const long nsteps = long(std::ceil(opts.s_max / step));
    step = opts.s_max / double(nsteps);
    sol.step = step;

    State st{opts.theta0, Vec2::Zero()};
    sol.s.reserve(nsteps + 1);
    sol.theta.reserve(nsteps + 1);
    sol.points.reserve(nsteps + 1);
    sol.s.push_back(0.0);
    sol.theta.push_back(st.theta);
    sol.points.push_back(st.alpha);

    auto deriv = [&](const State& y) {
        return State{theta_rate(y.theta), Vec2(std::cos(y.theta), std::sin(y.theta))};
    };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.theta + a * d.theta, y.alpha + a * d.alpha};
    };

    bool crossed = false;
    for (long i = 0; i < nsteps; ++i) {
        const State k1 = deriv(st);
        const State k2 = deriv(axpy(st, 0.5 * step, k1));
        const State k3 = deriv(axpy(st, 0.5 * step, k2));
        const State k4 = deriv(axpy(st, step, k3));
        State next = st;
        next.theta += step / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
        next.alpha += step / 6.0 * (k1.alpha + 2 * k2.alpha + 2 * k3.alpha + k4.alpha);

        // First full turning period: |theta - theta0| crosses 2*pi.
        if (!crossed && std::abs(next.theta - opts.theta0) >= 2.0 * kPi) {
            crossed = true;
            const double want = opts.theta0 +
                                (next.theta > opts.theta0 ? 2.0 * kPi : -2.0 * kPi);
            // Newton on the step fraction using the exact slope field.
            double f = std::clamp((want - st.theta) / (next.theta - st.theta), 0.0, 1.0);
            State probe = st;
            for (int it = 0; it < 8; ++it) {
                probe = st;
                const double hh = f * step;
                const State p1 = deriv(probe);
                const State p2 = deriv(axpy(probe, 0.5 * hh, p1));
                const State p3 = deriv(axpy(probe, 0.5 * hh, p2));
                const State p4 = deriv(axpy(probe, hh, p3));
                probe.theta += hh / 6.0 * (p1.theta + 2 * p2.theta + 2 * p3.theta + p4.theta);
                probe.alpha += hh / 6.0 * (p1.alpha + 2 * p2.alpha + 2 * p3.alpha + p4.alpha);
                const double rate = theta_rate(probe.theta);
                if (std::abs(rate) < 1e-14) break;
                f -= (probe.theta - want) / (rate * step);
                f = std::clamp(f, 0.0, 1.0);
            }
            sol.period = sol.s.back() + f * step;
            sol.closure_gap = probe.alpha.norm();
            sol.closed = sol.closure_gap <= opts.closure_tol;
        }

        st = next;
        sol.s.push_back((i + 1) * step);
        sol.theta.push_back(st.theta);
        sol.points.push_back(st.alpha);
    }
    return sol;
}

ClosureResult detect_closure(const PlanarCurveSolution& sol, const CurvatureField& field,
                             double integral_tol) {
    ClosureResult out;

    bool nonvanishing = true;
    double integral_norm = 0.0;
    try {
        const Vec2 integral = closure_integral(field, sol.e1, sol.e2);
        integral_norm = integral.norm();
    } catch (const EvaluationError&) {
        nonvanishing = false;
    }
    out.integral_norm = integral_norm;

    const bool integral_closed = nonvanishing && integral_norm < integral_tol;

    if (nonvanishing && !sol.period.has_value() && !sol.straight_line)
        throw ConfigError("curve was not integrated over a full turning period");

    out.closed = sol.closed;
    out.gap = sol.closure_gap;
    out.criteria_agree = (integral_closed == sol.closed);
    return out;
}

} // namespace hsurf
