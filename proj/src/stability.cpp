#include "hsurf/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "hsurf/error.hpp"
#include "hsurf/geodesic.hpp"
#include "hsurf/parallel.hpp"

namespace hsurf {

namespace {

// ---------------------------------------------------------------------
// Graph assembly: conservative 9-point metric stencil
//
// Lap f = (1/W) d_i( W g^{ij} d_j f ),  W = sqrt(det g),
// with W g^11 = (1+q^2)/W, W g^12 = -pq/W, W g^22 = (1+p^2)/W.
// ---------------------------------------------------------------------

struct GraphCoeffs {
    double a11, a12, a22, w;
    double p, q;
};

// Metric coefficients from the stored vertex normal (Du = -(nx,ny)/nz),
// so that the derivative error of the gradient stays as smooth across the
// patch as the normals themselves.
GraphCoeffs coeffs_from_normal(const Vec3& n) {
    const double p = -n.x() / n.z();
    const double q = -n.y() / n.z();
    const double w = std::sqrt(1.0 + p * p + q * q);
    return {(1.0 + q * q) / w, -p * q / w, (1.0 + p * p) / w, w, p, q};
}

void assemble_graph(const DiscreteSurface& s, const CurvatureField& field,
                    StabilityOperator& op, std::vector<Triplet>& trip) {
    const GridDomain& d = *s.graph_domain();
    const double h = d.spacing();

    auto at = [&](int i, int j) {
        return coeffs_from_normal(s.normal(s.vertex_of_node(i, j)));
    };

    for (int v = 0; v < s.vertex_count(); ++v) {
        if (s.is_boundary(v)) {
            trip.emplace_back(v, v, 1.0);
            continue;
        }
        const auto [i, j] = s.grid_coords(v);
        auto add = [&](int node, double wgt) {
            const int col = s.vertex_of_node(node % d.nx(), node / d.nx());
            if (col >= 0) trip.emplace_back(v, col, wgt);
        };

        const GraphCoeffs cc = at(i, j);
        const double inv_w = 1.0 / cc.w;
        const GraphCoeffs ce = at(i + 1, j);
        const GraphCoeffs cw = at(i - 1, j);
        const GraphCoeffs cn = at(i, j + 1);
        const GraphCoeffs cs = at(i, j - 1);

        // Diagonal (conservative half-point) terms.
        const double he = 0.5 * (cc.a11 + ce.a11) / (h * h) * inv_w;
        const double hw = 0.5 * (cc.a11 + cw.a11) / (h * h) * inv_w;
        const double hn = 0.5 * (cc.a22 + cn.a22) / (h * h) * inv_w;
        const double hs = 0.5 * (cc.a22 + cs.a22) / (h * h) * inv_w;
        add(d.index(i + 1, j), he);
        add(d.index(i - 1, j), hw);
        add(d.index(i, j + 1), hn);
        add(d.index(i, j - 1), hs);
        add(d.index(i, j), -(he + hw + hn + hs));

        // Mixed terms d_x(a12 d_y f) + d_y(a12 d_x f), centered.
        std::vector<std::pair<int, double>> tang;
        auto add_mixed = [&](int ni, int nj, double coeff, bool ydir) {
            tang.clear();
            if (ydir) grid_dy_weights(d, ni, nj, tang);
            else grid_dx_weights(d, ni, nj, tang);
            for (auto [node, wgt] : tang) add(node, coeff * wgt);
        };
        add_mixed(i + 1, j, ce.a12 / (2 * h) * inv_w, true);
        add_mixed(i - 1, j, -cw.a12 / (2 * h) * inv_w, true);
        add_mixed(i, j + 1, cn.a12 / (2 * h) * inv_w, false);
        add_mixed(i, j - 1, -cs.a12 / (2 * h) * inv_w, false);

        // Advection <X_H, grad f> via contravariant components.
        const Vec3 x_h = op.advection[v];
        const double p = cc.p, q = cc.q;
        const Vec3 ru(1, 0, p), rv(0, 1, q);
        const double w2 = 1.0 + p * p + q * q;
        const double a = x_h.dot(ru), b = x_h.dot(rv);
        const double xu = ((1 + q * q) * a - p * q * b) / w2;
        const double xv = (-p * q * a + (1 + p * p) * b) / w2;
        tang.clear();
        grid_dx_weights(d, i, j, tang);
        for (auto [node, wgt] : tang) add(node, xu * wgt);
        tang.clear();
        grid_dy_weights(d, i, j, tang);
        for (auto [node, wgt] : tang) add(node, xv * wgt);

        trip.emplace_back(v, v, op.potential[v]);
    }
}

// ---------------------------------------------------------------------
// Revolved assembly: weighted least-squares fits of degree 4 in local
// tangent-plane coordinates.  In projection coordinates at p the metric
// is Euclidean to second order, so Lap f = f_xx + f_yy and grad f =
// (f_x, f_y) of the fitted polynomial at the origin.  This stays
// pointwise second order through the poles, where a 5-point lat-long
// stencil degrades to first order.
// ---------------------------------------------------------------------

constexpr int kBasis = 15; // monomials of total degree <= 4

void monomials(double x, double y, double* out) {
    out[0] = 1;
    out[1] = x;
    out[2] = y;
    out[3] = x * x;
    out[4] = x * y;
    out[5] = y * y;
    out[6] = x * x * x;
    out[7] = x * x * y;
    out[8] = x * y * y;
    out[9] = y * y * y;
    out[10] = x * x * x * x;
    out[11] = x * x * x * y;
    out[12] = x * x * y * y;
    out[13] = x * y * y * y;
    out[14] = y * y * y * y;
}

struct MlsStencil {
    std::vector<int> cols;
    std::vector<double> lap, gx, gy; // weights per column
};

// Window of grid neighbors around vertex v on a revolved surface.
std::vector<int> revolved_window(const DiscreteSurface& s, int v, double r_zeta) {
    const auto* L = s.revolved();
    const int R = L->ring_rows, C = L->cols;
    const auto [ring, col] = s.grid_coords(v);
    std::vector<int> pts;

    const int lo_limit = L->south_pole ? -1 : 0;
    const int hi_limit = L->north_pole ? R : R - 1;
    int lo = std::max(ring - 2, lo_limit);
    int hi = std::min(ring + 2, hi_limit);
    // A degree-4 fit needs five meridian stations; widen one-sidedly when
    // the window is clamped at a pole or boundary.
    while (hi - lo < 4 && (lo > lo_limit || hi < hi_limit)) {
        if (lo > lo_limit) --lo;
        if (hi - lo < 4 && hi < hi_limit) ++hi;
    }
    for (int rr = lo; rr <= hi; ++rr) {
        if (rr == -1) {
            pts.push_back(0);
            continue;
        }
        if (rr == R) {
            pts.push_back(s.vertex_count() - 1);
            continue;
        }
        const double ring_x = L->row_x[rr];
        const double dphi = 2.0 * kPi / C;
        int wcols = C / 2;
        if (ring_x * dphi > 1e-12)
            wcols = std::min(C / 2, int(std::ceil(r_zeta / (ring_x * dphi))) + 1);
        if (wcols >= C / 2) {
            for (int c = 0; c < C; ++c) pts.push_back(L->vertex_of(rr, c));
        } else {
            for (int c = col - wcols; c <= col + wcols; ++c)
                pts.push_back(L->vertex_of(rr, c));
        }
    }
    return pts;
}

// Anisotropic scaling: the azimuthal spacing x * dphi can exceed the
// meridian spacing several-fold, so the fit coordinates are normalized
// per axis to keep the degree-4 Gram matrix well conditioned.
MlsStencil mls_stencil(const DiscreteSurface& s, int v, double ds) {
    const auto* L = s.revolved();
    const auto [ring, col] = s.grid_coords(v);
    const double ring_x = (ring >= 0 && ring < L->ring_rows) ? L->row_x[ring] : 0.0;
    const double dphi = 2.0 * kPi / L->cols;
    const double r_xi = 2.2 * ds;
    const double r_zeta = 2.2 * std::max(ds, ring_x * dphi);
    const double sigma_xi = r_xi / 1.5;
    const double sigma_zeta = r_zeta / 1.5;

    const std::vector<int> pts = revolved_window(s, v, r_zeta);
    const Vec3& p = s.position(v);
    const Vec3& t1 = s.tangent1(v);
    const Vec3& t2 = s.tangent2(v);

    using Mat15 = Eigen::Matrix<double, kBasis, kBasis>;
    using Vec15 = Eigen::Matrix<double, kBasis, 1>;
    Mat15 gram = Mat15::Zero();
    std::vector<std::array<double, kBasis>> rows(pts.size());
    std::vector<double> weights(pts.size());

    for (size_t k = 0; k < pts.size(); ++k) {
        const Vec3 dq = s.position(pts[k]) - p;
        const double xi = dq.dot(t1) / sigma_xi;
        const double zeta = dq.dot(t2) / sigma_zeta;
        const double wgt = std::exp(-(xi * xi + zeta * zeta));
        monomials(xi, zeta, rows[k].data());
        weights[k] = wgt;
        Eigen::Map<const Vec15> a(rows[k].data());
        gram.noalias() += wgt * a * a.transpose();
    }
    gram += Mat15::Identity() * (1e-13 * gram.trace());

    const Eigen::LDLT<Mat15> solver(gram);
    Vec15 e_lap = Vec15::Zero(), e_gx = Vec15::Zero(), e_gy = Vec15::Zero();
    e_lap[3] = 2.0 / (sigma_xi * sigma_xi);
    e_lap[5] = 2.0 / (sigma_zeta * sigma_zeta);
    e_gx[1] = 1.0 / sigma_xi;
    e_gy[2] = 1.0 / sigma_zeta;
    const Vec15 y_lap = solver.solve(e_lap);
    const Vec15 y_gx = solver.solve(e_gx);
    const Vec15 y_gy = solver.solve(e_gy);

    MlsStencil out;
    out.cols = pts;
    out.lap.resize(pts.size());
    out.gx.resize(pts.size());
    out.gy.resize(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        Eigen::Map<const Vec15> a(rows[k].data());
        out.lap[k] = weights[k] * a.dot(y_lap);
        out.gx[k] = weights[k] * a.dot(y_gx);
        out.gy[k] = weights[k] * a.dot(y_gy);
    }
    return out;
}

void assemble_revolved(const DiscreteSurface& s, StabilityOperator& op,
                       std::vector<Triplet>& trip, std::vector<Triplet>& gx_trip,
                       std::vector<Triplet>& gy_trip) {
    const auto* L = s.revolved();
    const double ds = L->ring_rows > 1 ? L->row_s[1] - L->row_s[0] : L->row_s[0];

    const int n = s.vertex_count();
    std::vector<std::vector<Triplet>> rows(n), grows_x(n), grows_y(n);
    parallel_for(0, n, [&](std::ptrdiff_t v) {
        if (s.is_boundary(int(v))) {
            rows[v].emplace_back(int(v), int(v), 1.0);
            return;
        }
        const MlsStencil st = mls_stencil(s, int(v), ds);
        const Vec3 x_h = op.advection[v];
        const double ax = x_h.dot(s.tangent1(int(v)));
        const double ay = x_h.dot(s.tangent2(int(v)));
        for (size_t k = 0; k < st.cols.size(); ++k) {
            const double w = st.lap[k] + ax * st.gx[k] + ay * st.gy[k];
            rows[v].emplace_back(int(v), st.cols[k], w);
            grows_x[v].emplace_back(int(v), st.cols[k], st.gx[k]);
            grows_y[v].emplace_back(int(v), st.cols[k], st.gy[k]);
        }
        rows[v].emplace_back(int(v), int(v), op.potential[v]);
    });
    for (int v = 0; v < n; ++v) {
        trip.insert(trip.end(), rows[v].begin(), rows[v].end());
        gx_trip.insert(gx_trip.end(), grows_x[v].begin(), grows_x[v].end());
        gy_trip.insert(gy_trip.end(), grows_y[v].begin(), grows_y[v].end());
    }
}

} // namespace

StabilityOperator assemble_stability_operator(const DiscreteSurface& surface,
                                              const CurvatureField& field) {
    const int n = surface.vertex_count();
    StabilityOperator op;
    op.surface = &surface;
    op.advection.resize(n);
    op.potential.resize(n);
    for (int v = 0; v < n; ++v) {
        if (surface.vertex_area(v) < 1e-14)
            throw MeshError("degenerate metric cell in operator assembly");
        op.advection[v] = 2.0 * field.gradient(surface.normal(v));
        op.potential[v] = surface.sigma2(v);
    }

    std::vector<Triplet> trip, gx_trip, gy_trip;
    if (surface.kind() == DiscreteSurface::Kind::Graph) {
        assemble_graph(surface, field, op, trip);
    } else {
        assemble_revolved(surface, op, trip, gx_trip, gy_trip);
    }
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.grad_t1.resize(n, n);
    op.grad_t1.setFromTriplets(gx_trip.begin(), gx_trip.end());
    op.grad_t2.resize(n, n);
    op.grad_t2.setFromTriplets(gy_trip.begin(), gy_trip.end());
    return op;
}

double jacobi_residual(const StabilityOperator& op, const Vec3& axis) {
    const DiscreteSurface& s = *op.surface;
    VecX nu(s.vertex_count());
    for (int v = 0; v < s.vertex_count(); ++v) nu[v] = s.normal(v).dot(axis);
    const VecX r = op.matrix * nu;
    double worst = 0.0;
    for (int v = 0; v < s.vertex_count(); ++v)
        if (!s.is_boundary(v)) worst = std::max(worst, std::abs(r[v]));
    return worst;
}

double jacobi_residual(const DiscreteSurface& surface, const CurvatureField& field,
                       const Vec3& axis) {
    return jacobi_residual(assemble_stability_operator(surface, field), axis);
}

EigenResult principal_eigenvalue(const StabilityOperator& op) {
    const DiscreteSurface& s = *op.surface;
    const int n = s.vertex_count();
    std::vector<int> keep, sub(n, -1);
    for (int v = 0; v < n; ++v)
        if (!s.is_boundary(v)) {
            sub[v] = int(keep.size());
            keep.push_back(v);
        }
    const int m = int(keep.size());
    if (m == 0) throw MeshError("no interior vertices for the eigenproblem");

    // A = -L restricted to the interior (Dirichlet columns dropped).
    std::vector<Triplet> trip;
    trip.reserve(op.matrix.nonZeros());
    for (int col = 0; col < op.matrix.outerSize(); ++col)
        for (SparseMat::InnerIterator it(op.matrix, col); it; ++it) {
            const int r = sub[int(it.row())], c = sub[col];
            if (r >= 0 && c >= 0) trip.emplace_back(r, c, -it.value());
        }
    SparseMat a(m, m);
    a.setFromTriplets(trip.begin(), trip.end());

    // Gershgorin lower bound of the spectrum.
    VecX diag = VecX::Zero(m), offsum = VecX::Zero(m);
    for (int col = 0; col < a.outerSize(); ++col)
        for (SparseMat::InnerIterator it(a, col); it; ++it) {
            if (it.row() == col) diag[col] += it.value();
            else offsum[int(it.row())] += std::abs(it.value());
        }
    double shift = (diag - offsum).minCoeff() - 1.0;

    EigenResult out;
    VecX v = VecX::Ones(m) / std::sqrt(double(m));
    double lambda = 0.0;

    const int max_iters = 400;
    int total_iters = 0;
    for (int attempt = 0; attempt < 5 && !out.converged; ++attempt) {
        SparseMat shifted = a;
        for (int k = 0; k < m; ++k) shifted.coeffRef(k, k) -= shift;
        shifted.makeCompressed();
        Eigen::SparseLU<SparseMat> lu;
        lu.compute(shifted);
        if (lu.info() != Eigen::Success) {
            shift -= 0.21349; // nudge off a near-singular shift
            continue;
        }
        int stall = 0;
        double prev_res = std::numeric_limits<double>::infinity();
        while (total_iters < max_iters) {
            ++total_iters;
            VecX w = lu.solve(v);
            const double nw = w.norm();
            if (!std::isfinite(nw) || nw == 0.0) break;
            v = w / nw;
            const VecX av = a * v;
            lambda = v.dot(av);
            const double res = (av - lambda * v).norm();
            if (res <= 1e-8) {
                out.converged = true;
                out.residual = res;
                break;
            }
            if (res > 0.9 * prev_res) ++stall;
            prev_res = res;
            if (stall > 12) break; // re-shift closer to the estimate
        }
        if (!out.converged)
            shift = lambda - std::max(0.02 * std::abs(lambda), 2e-2);
        out.residual = prev_res;
    }
    out.iterations = total_iters;
    out.lambda0 = lambda;

    // Perron-type sign validation.
    const double peak = v.lpNorm<Eigen::Infinity>();
    int pos = 0, neg = 0;
    for (int k = 0; k < m; ++k) {
        if (v[k] > 1e-6 * peak) ++pos;
        if (v[k] < -1e-6 * peak) ++neg;
    }
    out.sign_definite = (pos == 0 || neg == 0);
    if (neg > pos) v = -v;

    out.psi = VecX::Zero(n);
    for (int k = 0; k < m; ++k) out.psi[keep[k]] = v[k];
    out.status = (out.converged && out.sign_definite) ? "converged" : "indeterminate";
    return out;
}

std::vector<double> divergence(const StabilityOperator& op, const std::vector<Vec3>& x) {
    const DiscreteSurface& s = *op.surface;
    const int n = s.vertex_count();
    if (int(x.size()) != n) throw ConfigError("vector field size mismatch");
    std::vector<double> div(n, 0.0);

    if (s.kind() == DiscreteSurface::Kind::Graph) {
        const GridDomain& d = *s.graph_domain();
        // div X = (1/W) [ d_x(W X^u) + d_y(W X^v) ] with contravariant
        // components of the tangential field.
        VecX fx(d.node_count()), fy(d.node_count());
        fx.setZero();
        fy.setZero();
        for (int v = 0; v < n; ++v) {
            const auto [i, j] = s.grid_coords(v);
            const GraphCoeffs c = coeffs_from_normal(s.normal(v));
            const Vec3 ru(1, 0, c.p), rv(0, 1, c.q);
            const double w2 = c.w * c.w;
            const double a = x[v].dot(ru), b = x[v].dot(rv);
            const double xu = ((1 + c.q * c.q) * a - c.p * c.q * b) / w2;
            const double xv = (-c.p * c.q * a + (1 + c.p * c.p) * b) / w2;
            fx[d.index(i, j)] = c.w * xu;
            fy[d.index(i, j)] = c.w * xv;
        }
        for (int v = 0; v < n; ++v) {
            if (s.is_boundary(v)) continue;
            const auto [i, j] = s.grid_coords(v);
            const GraphCoeffs c = coeffs_from_normal(s.normal(v));
            div[v] = (grid_dx(d, fx, i, j) + grid_dy(d, fy, i, j)) / c.w;
        }
        return div;
    }

    // Revolved: div X = t1 . d_xi X + t2 . d_zeta X with the MLS gradient
    // stencils applied to the Cartesian components.
    VecX cx(n), cy(n), cz(n);
    for (int v = 0; v < n; ++v) {
        cx[v] = x[v].x();
        cy[v] = x[v].y();
        cz[v] = x[v].z();
    }
    const VecX dx1 = op.grad_t1 * cx, dy1 = op.grad_t1 * cy, dz1 = op.grad_t1 * cz;
    const VecX dx2 = op.grad_t2 * cx, dy2 = op.grad_t2 * cy, dz2 = op.grad_t2 * cz;
    for (int v = 0; v < n; ++v) {
        if (s.is_boundary(v)) continue;
        const Vec3 d1(dx1[v], dy1[v], dz1[v]);
        const Vec3 d2(dx2[v], dy2[v], dz2[v]);
        div[v] = s.tangent1(v).dot(d1) + s.tangent2(v).dot(d2);
    }
    return div;
}

std::vector<double> schrodinger_transform(const StabilityOperator& op,
                                          const std::vector<double>& q,
                                          const std::vector<Vec3>& x) {
    const DiscreteSurface& s = *op.surface;
    const std::vector<double> div = divergence(op, x);
    std::vector<double> out(q.size());
    for (int v = 0; v < s.vertex_count(); ++v) {
        if (s.is_boundary(v)) {
            out[v] = q[v];
            continue;
        }
        out[v] = q[v] - 0.5 * div[v] - 0.25 * x[v].squaredNorm();
    }
    return out;
}

std::vector<double> q_transform(const StabilityOperator& op, const CurvatureField& field) {
    const DiscreteSurface& s = *op.surface;
    (void)field;
    std::vector<double> q(s.vertex_count());
    for (int v = 0; v < s.vertex_count(); ++v) q[v] = s.sigma2(v);
    return schrodinger_transform(op, q, op.advection);
}

std::vector<double> q_expanded(const DiscreteSurface& surface,
                               const CurvatureField& field) {
    std::vector<double> out(surface.vertex_count());
    for (int v = 0; v < surface.vertex_count(); ++v) {
        const Vec3& eta = surface.normal(v);
        const Vec3 g = field.gradient(eta);
        const double a1 = field.hessian_form(eta, surface.tangent1(v), surface.tangent1(v));
        const double a2 = field.hessian_form(eta, surface.tangent2(v), surface.tangent2(v));
        const double hm = surface.mean_curvature(v);
        const double k = surface.gauss_curvature(v);
        out[v] = 4 * hm * hm - 2 * k - g.squaredNorm() + surface.kappa1(v) * a1 +
                 surface.kappa2(v) * a2;
    }
    return out;
}

MarginReport desi_q_check(const DiscreteSurface& surface, const CurvatureField& field,
                          double c) {
    if (!(c > 0)) throw ConfigError("margin check requires a positive constant c");
    const StabilityOperator op = assemble_stability_operator(surface, field);
    const std::vector<double> q = q_transform(op, field);
    MarginReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int v = 0; v < surface.vertex_count(); ++v) {
        if (surface.is_boundary(v)) continue;
        const double margin = q[v] + surface.gauss_curvature(v) - c;
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.argmin = v;
        }
        if (margin < 0) ++rep.failing;
    }
    return rep;
}

RadiusReport radius_check(const DiscreteSurface& surface, double c) {
    if (!(c > 0)) throw ConfigError("radius check requires a positive constant c");
    RadiusReport rep;
    rep.intrinsic_radius = intrinsic_radius(surface); // throws if closed
    rep.bound = 2.0 * kPi / std::sqrt(3.0 * c);
    rep.pass = rep.intrinsic_radius <= rep.bound;
    return rep;
}

CertificateReport stability_certificate(const DiscreteSurface& surface,
                                        const CurvatureField& field) {
    CertificateReport rep;
    const StabilityOperator op = assemble_stability_operator(surface, field);

    if (!surface.closed()) {
        std::vector<Vec3> axes = {Vec3::UnitZ(),  Vec3::UnitX(),  Vec3::UnitY(),
                                  -Vec3::UnitZ(), -Vec3::UnitX(), -Vec3::UnitY()};
        for (const Vec3& x : fibonacci_sphere(8)) axes.push_back(x);
        for (const Vec3& a : axes) {
            double min_interior = std::numeric_limits<double>::infinity();
            double min_boundary = std::numeric_limits<double>::infinity();
            for (int v = 0; v < surface.vertex_count(); ++v) {
                const double nu = surface.normal(v).dot(a);
                if (surface.is_boundary(v)) min_boundary = std::min(min_boundary, nu);
                else min_interior = std::min(min_interior, nu);
            }
            if (min_interior > 0 && min_boundary > -1e-12) {
                rep.verdict = Certificate::Stable;
                rep.witness = "normal component nu = <eta, a> (L nu = 0)";
                rep.axis = a;
                rep.min_witness_value = min_interior;
                return rep;
            }
        }
    }

    const EigenResult eig = principal_eigenvalue(op);
    rep.lambda0 = eig.lambda0;
    if (!eig.converged || !eig.sign_definite) {
        rep.verdict = Certificate::Indeterminate;
        rep.witness = "eigenvalue iteration " + eig.status;
        return rep;
    }
    const double tol = 1e-9 * (1.0 + std::abs(eig.lambda0));
    if (eig.lambda0 > tol) {
        rep.verdict = Certificate::Stable;
        rep.witness = "principal eigenfunction (positive, L psi = -lambda0 psi < 0)";
        double mn = std::numeric_limits<double>::infinity();
        for (int v = 0; v < surface.vertex_count(); ++v)
            if (!surface.is_boundary(v)) mn = std::min(mn, eig.psi[v]);
        rep.min_witness_value = mn;
    } else if (eig.lambda0 < -tol) {
        rep.verdict = Certificate::Unstable;
        rep.witness = "negative principal eigenvalue";
    } else {
        rep.verdict = Certificate::Indeterminate;
        rep.witness = "principal eigenvalue within tolerance of zero";
    }
    return rep;
}

double flux_integral(const DiscreteSurface& surface, const CurvatureField& field,
                     const Vec3& v) {
    if (!surface.closed())
        throw GeometryError("flux integral requires a closed surface");
    double acc = 0.0;
    for (int k = 0; k < surface.vertex_count(); ++k) {
        const Vec3& eta = surface.normal(k);
        acc += surface.vertex_area(k) * eta.dot(v) * field.eval(eta);
    }
    return acc;
}

StabilityReport stability_report(const DiscreteSurface& surface,
                                 const CurvatureField& field, int estrella_resolution) {
    StabilityReport rep;
    const StabilityOperator op = assemble_stability_operator(surface, field);

    const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (int k = 0; k < 3; ++k) rep.jacobi_residuals[k] = jacobi_residual(op, axes[k]);

    const EigenResult eig = principal_eigenvalue(op);
    rep.lambda0 = eig.lambda0;
    rep.eigen_status = eig.status;
    rep.eigenfunction_sign_definite = eig.sign_definite;

    const EstrellaReport est = estrella_constant(field, estrella_resolution);
    rep.estrella_c = est.min_value;
    rep.estrella_argmin = est.argmin;
    if (est.min_value > 0) {
        rep.radius_bound = 2.0 * kPi / std::sqrt(3.0 * est.min_value);
        const std::vector<double> q = q_transform(op, field);
        double mn = std::numeric_limits<double>::infinity();
        for (int v = 0; v < surface.vertex_count(); ++v)
            if (!surface.is_boundary(v))
                mn = std::min(mn, q[v] + surface.gauss_curvature(v) - est.min_value);
        rep.desiq_margin = mn;
    }
    if (!surface.boundary_vertices().empty())
        rep.intrinsic_radius = intrinsic_radius(surface);

    const CertificateReport cert = stability_certificate(surface, field);
    rep.certificate = cert.verdict;
    rep.certificate_witness = cert.witness;
    return rep;
}

} // namespace hsurf
