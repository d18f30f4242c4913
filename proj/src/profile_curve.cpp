#include "hsurf/profile_curve.hpp"

#include <cmath>

#include "hsurf/error.hpp"

namespace hsurf {

ZonalProfile ZonalProfile::polynomial(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw ConfigError("zonal polynomial needs coefficients");
    ZonalProfile z;
    z.h = [coeffs](double t) {
        double acc = 0.0;
        for (size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
        return acc;
    };
    z.dh = [coeffs](double t) {
        double acc = 0.0;
        for (size_t k = coeffs.size(); k-- > 1;) acc = acc * t + double(k) * coeffs[k];
        return acc;
    };
    return z;
}

namespace {

struct State {
    double x, z, theta;
};

double checked_h(const ZonalProfile& zonal, double t) {
    const double v = zonal.h(std::clamp(t, -1.0, 1.0));
    if (!std::isfinite(v)) throw EvaluationError("zonal profile evaluated non-finite");
    return v;
}

} // namespace

void ProfileCurve::sample(double sq, double& xo, double& zo, double& thetao) const {
    if (s.empty()) throw GeometryError("empty profile");
    sq = std::clamp(sq, s.front(), s.back());
    size_t hi = size_t(std::lower_bound(s.begin(), s.end(), sq) - s.begin());
    if (hi == 0) hi = 1;
    if (hi >= s.size()) hi = s.size() - 1;
    const size_t lo = hi - 1;
    const double dt = s[hi] - s[lo];
    if (dt <= 0) {
        xo = x[lo];
        zo = z[lo];
        thetao = theta[lo];
        return;
    }
    const double u = (sq - s[lo]) / dt;
    // Hermite basis; slopes are exact from the ODE.
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    auto hermite = [&](double f0, double f1, double d0, double d1) {
        return h00 * f0 + h10 * dt * d0 + h01 * f1 + h11 * dt * d1;
    };
    xo = hermite(x[lo], x[hi], std::cos(theta[lo]), std::cos(theta[hi]));
    zo = hermite(z[lo], z[hi], std::sin(theta[lo]), std::sin(theta[hi]));
    thetao = hermite(theta[lo], theta[hi], theta_rate[lo], theta_rate[hi]);
}

ProfileCurve integrate_profile(const ZonalProfile& zonal, const ProfileStart& start,
                               const ProfileOptions& opts) {
    if (opts.step <= 0 || opts.s_max <= opts.step)
        throw ConfigError("invalid profile integration options");

    ProfileCurve out;
    out.step = opts.step;
    out.starts_at_pole = start.at_pole;

    auto rate = [&](const State& st) {
        const double r = 2.0 * checked_h(zonal, std::cos(st.theta)) -
                         std::sin(st.theta) / st.x;
        return r;
    };
    auto push = [&](double s, const State& st, double rt) {
        out.s.push_back(s);
        out.x.push_back(st.x);
        out.z.push_back(st.z);
        out.theta.push_back(st.theta);
        out.theta_rate.push_back(rt);
    };

    State st{};
    double s = 0.0;
    const double pole_band = 10.0 * opts.step;

    if (start.at_pole) {
        // Series start: sin(theta)/x is 0/0 on the axis with limit h(1).
        const double a = checked_h(zonal, 1.0);
        const double b = zonal.dh ? -zonal.dh(1.0) * a * a / 4.0 : 0.0;
        push(0.0, State{0.0, start.z0, 0.0}, a);
        const int nseries = 10;
        for (int k = 1; k <= nseries; ++k) {
            const double sk = pole_band * k / nseries;
            State sst;
            sst.theta = a * sk + b * sk * sk * sk;
            sst.x = sk - a * a * sk * sk * sk / 6.0;
            sst.z = start.z0 + a * sk * sk / 2.0 + (b - a * a * a / 6.0) * sk * sk * sk * sk / 4.0;
            if (k < nseries) push(sk, sst, rate(sst));
            else { st = sst; s = sk; push(sk, sst, rate(sst)); }
        }
    } else {
        if (start.x0 <= 0) throw ConfigError("off-axis start needs x0 > 0");
        st = State{start.x0, start.z0, start.theta0};
        push(0.0, st, rate(st));
    }

    auto rk4 = [&](const State& y, double h) {
        auto deriv = [&](const State& w) {
            return State{std::cos(w.theta), std::sin(w.theta), rate(w)};
        };
        auto axpy = [](const State& y0, double a, const State& d) {
            return State{y0.x + a * d.x, y0.z + a * d.z, y0.theta + a * d.theta};
        };
        const State k1 = deriv(y);
        const State k2 = deriv(axpy(y, 0.5 * h, k1));
        const State k3 = deriv(axpy(y, 0.5 * h, k2));
        const State k4 = deriv(axpy(y, h, k3));
        State next = y;
        next.x += h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        next.z += h / 6.0 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z);
        next.theta += h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
        return next;
    };

    const bool has_stop_theta = std::isfinite(opts.stop_theta);
    while (s < opts.s_max) {
        const double h = std::min(opts.step, opts.s_max - s);
        State next = rk4(st, h);

        if (has_stop_theta &&
            (st.theta - opts.stop_theta) * (next.theta - opts.stop_theta) <= 0.0 &&
            std::abs(next.theta - st.theta) > 0.0) {
            // Land exactly on the crossing (Newton on the step fraction).
            double f = std::clamp((opts.stop_theta - st.theta) / (next.theta - st.theta),
                                  0.0, 1.0);
            State probe = next;
            for (int it = 0; it < 8; ++it) {
                probe = rk4(st, f * h);
                const double r = rate(probe);
                if (std::abs(r) < 1e-14) break;
                f -= (probe.theta - opts.stop_theta) / (r * h);
                f = std::clamp(f, 0.0, 1.0);
            }
            s += f * h;
            st = probe;
            push(s, st, rate(st));
            return out;
        }

        if (next.x <= 0.0 ||
            (opts.stop_at_pole && next.x < pole_band && std::cos(next.theta) < 0.0)) {
            const State hand = next.x > 0.0 ? next : st;
            const double psi = kPi - hand.theta;
            if (std::abs(std::sin(hand.theta)) > 0.25)
                throw GeometryError(
                    "profile meets the axis with a non-horizontal tangent "
                    "(non-regular pole)");
            if (next.x > 0.0) {
                s += h;
                push(s, next, rate(next));
            }
            // Regular far pole: close with the mirrored series.
            const double a2 = checked_h(zonal, -1.0);
            const double sigma = hand.x * (1.0 + a2 * a2 * hand.x * hand.x / 6.0);
            out.end_pole_angle_error = std::abs(psi - a2 * sigma);
            out.ends_at_pole = true;
            out.s.push_back(out.s.back() + sigma);
            out.x.push_back(0.0);
            out.z.push_back(hand.z + 0.5 * sigma * psi);
            out.theta.push_back(kPi);
            out.theta_rate.push_back(a2);
            return out;
        }

        s += h;
        st = next;
        push(s, st, rate(st));
    }
    return out;
}

} // namespace hsurf
