#include "hsurf/discrete_surface.hpp"

#include <cmath>

#include "hsurf/error.hpp"

namespace hsurf {

void DiscreteSurface::finalize_boundary_list() {
    boundary_list_.clear();
    for (int v = 0; v < vertex_count(); ++v)
        if (boundary_[v]) boundary_list_.push_back(v);
}

double DiscreteSurface::total_area() const {
    double a = 0.0;
    for (double w : areas_) a += w;
    return a;
}

DiscreteSurface DiscreteSurface::from_graph(const GraphSolution& sol) {
    const GridDomain& d = sol.domain();
    DiscreteSurface s;
    s.kind_ = Kind::Graph;
    s.closed_ = false;
    s.gdomain_ = d;
    s.gvalues_ = sol.values();
    s.node_vertex_.assign(d.node_count(), -1);

    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (d.role(i, j) == GridDomain::Role::Outside) continue;
            const int v = int(s.positions_.size());
            s.node_vertex_[d.index(i, j)] = v;
            const Vec2 p = d.position(i, j);
            const double u = sol.value(i, j);
            s.positions_.emplace_back(p.x(), p.y(), u);
            s.coords_.emplace_back(i, j);
            const Vec3 eta = sol.upward_normal(i, j);
            s.normals_.push_back(eta);

            // Orthonormal frame from the coordinate tangents, oriented so
            // that t1 x t2 = eta.
            const Vec2 g = sol.du(i, j);
            const Vec3 ru(1, 0, g.x()), rv(0, 1, g.y());
            const Vec3 t1 = ru.normalized();
            const Vec3 t2 = (rv - rv.dot(t1) * t1).normalized();
            const double w = std::sqrt(1.0 + g.squaredNorm());
            s.areas_.push_back(d.spacing() * d.spacing() * w);

            const bool interior = d.role(i, j) == GridDomain::Role::Interior;
            s.boundary_.push_back(interior ? 0 : 1);
            if (!interior) {
                s.t1_.push_back(t1);
                s.t2_.push_back(t2);
                s.kappa1_.push_back(0.0);
                s.kappa2_.push_back(0.0);
                continue;
            }

            // Second fundamental form in the orthonormal frame; its
            // eigenvectors are the principal directions.
            const double h = d.spacing();
            const double uc = sol.value(i, j);
            const double uxx =
                (sol.value(i + 1, j) - 2 * uc + sol.value(i - 1, j)) / (h * h);
            const double uyy =
                (sol.value(i, j + 1) - 2 * uc + sol.value(i, j - 1)) / (h * h);
            double uxy;
            if (d.inside(i + 1, j + 1) && d.inside(i - 1, j - 1) &&
                d.inside(i + 1, j - 1) && d.inside(i - 1, j + 1)) {
                uxy = (sol.value(i + 1, j + 1) + sol.value(i - 1, j - 1) -
                       sol.value(i + 1, j - 1) - sol.value(i - 1, j + 1)) /
                      (4 * h * h);
            } else {
                uxy = 0.5 * ((sol.du(i + 1, j).y() - sol.du(i - 1, j).y()) / (2 * h) +
                             (sol.du(i, j + 1).x() - sol.du(i, j - 1).x()) / (2 * h));
            }
            Mat2 b;
            b << uxx / w, uxy / w, uxy / w, uyy / w;
            // Components of (t1,t2) in the (ru,rv) coordinate basis.
            Mat2 T;
            T << 1.0 / ru.norm(), -rv.dot(t1) / (ru.norm() * (rv - rv.dot(t1) * t1).norm()),
                0.0, 1.0 / (rv - rv.dot(t1) * t1).norm();
            const Mat2 S = T.transpose() * b * T;
            Eigen::SelfAdjointEigenSolver<Mat2> eig(S);
            const double k1 = eig.eigenvalues()[1]; // descending order below
            const double k2 = eig.eigenvalues()[0];
            const Vec2 d1 = eig.eigenvectors().col(1);
            const Vec2 d2 = eig.eigenvectors().col(0);
            s.kappa1_.push_back(k1);
            s.kappa2_.push_back(k2);
            Vec3 p1 = (d1.x() * t1 + d1.y() * t2).normalized();
            Vec3 p2 = (d2.x() * t1 + d2.y() * t2).normalized();
            if (p1.cross(p2).dot(eta) < 0) p2 = -p2; // keep the frame right-handed
            s.t1_.push_back(p1);
            s.t2_.push_back(p2);
        }
    s.finalize_boundary_list();
    return s;
}

DiscreteSurface DiscreteSurface::revolve(const ProfileCurve& profile,
                                         const ZonalProfile& zonal, int ring_rows,
                                         int cols, bool boundary_at_end) {
    if (profile.size() < 4) throw MeshError("profile too short to revolve");
    if (ring_rows < 3 || cols < 8) throw MeshError("revolve grid too coarse");
    if (!profile.starts_at_pole)
        throw MeshError("revolve expects a profile starting on the axis");
    const bool to_pole = profile.ends_at_pole;
    if (!to_pole && !boundary_at_end)
        throw MeshError("open profile requires a boundary ring");

    DiscreteSurface s;
    s.kind_ = Kind::Revolved;
    s.closed_ = to_pole && !boundary_at_end;

    RevolvedLayout& L = s.layout_;
    L.ring_rows = ring_rows;
    L.cols = cols;
    L.south_pole = true;
    L.north_pole = s.closed_;
    L.closed = s.closed_;

    const double total = profile.total_length();
    const double dphi = 2.0 * kPi / cols;

    // Ring arclength stations: interior stations for a closed surface,
    // endpoint included when the last ring is the boundary.
    std::vector<double> stations(ring_rows);
    for (int r = 0; r < ring_rows; ++r)
        stations[r] = s.closed_ ? total * (r + 1) / (ring_rows + 1)
                                : total * (r + 1) / ring_rows;

    L.row_s = stations;
    L.row_x.resize(ring_rows);
    L.row_z.resize(ring_rows);
    L.row_theta.resize(ring_rows);
    L.row_kappa_meridian.resize(ring_rows);
    L.row_kappa_parallel.resize(ring_rows);

    const int nverts = ring_rows * cols + 1 + (L.north_pole ? 1 : 0);
    s.positions_.reserve(nverts);

    auto push_vertex = [&](const Vec3& pos, const Vec3& eta, const Vec3& t1,
                           const Vec3& t2, double k1, double k2, double area,
                           bool boundary, std::pair<int, int> rc) {
        s.positions_.push_back(pos);
        s.normals_.push_back(eta);
        s.t1_.push_back(t1);
        s.t2_.push_back(t2);
        s.kappa1_.push_back(k1);
        s.kappa2_.push_back(k2);
        s.areas_.push_back(area);
        s.boundary_.push_back(boundary ? 1 : 0);
        s.coords_.push_back(rc);
    };

    // South pole: umbilic with curvature h(1).
    {
        double x0, z0, th0;
        profile.sample(0.0, x0, z0, th0);
        const double k = zonal.h(1.0);
        const double cap = 0.5 * stations[0];
        push_vertex(Vec3(0, 0, z0), Vec3(0, 0, 1), Vec3::UnitX(), Vec3::UnitY(), k, k,
                    kPi * cap * cap, false, {-1, 0});
    }

    for (int r = 0; r < ring_rows; ++r) {
        double x, z, th;
        profile.sample(stations[r], x, z, th);
        if (x <= 1e-12) throw MeshError("degenerate ring radius while revolving");
        L.row_x[r] = x;
        L.row_z[r] = z;
        L.row_theta[r] = th;
        const double kpar = std::sin(th) / x;
        const double kmer = 2.0 * zonal.h(std::cos(th)) - kpar;
        L.row_kappa_meridian[r] = kmer;
        L.row_kappa_parallel[r] = kpar;

        const double s_lo = r == 0 ? 0.0 : stations[r - 1];
        const double s_hi = r + 1 < ring_rows ? stations[r + 1] : total;
        double ds = 0.5 * (s_hi - s_lo);
        if (!s.closed_ && r + 1 == ring_rows) ds = 0.5 * (stations[r] - s_lo);
        const double area = x * ds * dphi;

        const bool is_boundary = boundary_at_end && r + 1 == ring_rows;
        for (int c = 0; c < cols; ++c) {
            const double phi = c * dphi;
            const double cp = std::cos(phi), sp = std::sin(phi);
            const Vec3 pos(x * cp, x * sp, z);
            const Vec3 eta(-std::sin(th) * cp, -std::sin(th) * sp, std::cos(th));
            const Vec3 t1(std::cos(th) * cp, std::cos(th) * sp, std::sin(th));
            const Vec3 t2(-sp, cp, 0.0);
            push_vertex(pos, eta, t1, t2, kmer, kpar, area, is_boundary, {r, c});
        }
    }

    if (L.north_pole) {
        double x1, z1, th1;
        profile.sample(total, x1, z1, th1);
        const double k = zonal.h(-1.0);
        const double cap = 0.5 * (total - stations[ring_rows - 1]);
        // Frame (e1, -e2) keeps t1 x t2 = eta = -e3.
        push_vertex(Vec3(0, 0, z1), Vec3(0, 0, -1), Vec3::UnitX(), -Vec3::UnitY(), k, k,
                    kPi * cap * cap, false, {ring_rows, 0});
    }

    s.finalize_boundary_list();
    return s;
}

DiscreteSurface DiscreteSurface::round_sphere(double radius, int ring_rows, int cols) {
    if (radius <= 0) throw ConfigError("sphere radius must be positive");
    // Exact semicircle profile of the sphere with inner normal; H = 1/r.
    const double h0 = 1.0 / radius;
    ProfileCurve prof;
    const int n = std::max(4 * ring_rows, 64);
    prof.starts_at_pole = true;
    prof.ends_at_pole = true;
    prof.step = kPi * radius / n;
    for (int i = 0; i <= n; ++i) {
        const double s = kPi * radius * i / n;
        const double th = s / radius;
        prof.s.push_back(s);
        prof.x.push_back(radius * std::sin(th));
        prof.z.push_back(-radius * std::cos(th));
        prof.theta.push_back(th);
        prof.theta_rate.push_back(h0);
    }
    ZonalProfile zon = ZonalProfile::polynomial({h0});
    return revolve(prof, zon, ring_rows, cols, false);
}

DiscreteSurface DiscreteSurface::flat_disk(double radius, double spacing) {
    const GridDomain dom = GridDomain::disk(Vec2(0, 0), radius, spacing);
    GraphSolution sol(dom, VecX::Zero(dom.node_count()));
    return from_graph(sol);
}

std::vector<DiscreteSurface::Edge> DiscreteSurface::metric_edges() const {
    std::vector<Edge> edges;
    auto add = [&](int a, int b) {
        if (a < 0 || b < 0 || a == b) return;
        edges.push_back({a, b, (positions_[a] - positions_[b]).norm()});
    };

    if (kind_ == Kind::Graph) {
        const GridDomain& d = *gdomain_;
        for (int j = 0; j < d.ny(); ++j)
            for (int i = 0; i < d.nx(); ++i) {
                const int v = node_vertex_[d.index(i, j)];
                if (v < 0) continue;
                auto vid = [&](int a, int b) {
                    return (a >= 0 && a < d.nx() && b >= 0 && b < d.ny())
                               ? node_vertex_[d.index(a, b)]
                               : -1;
                };
                add(v, vid(i + 1, j));
                add(v, vid(i, j + 1));
                add(v, vid(i + 1, j + 1));
                add(v, vid(i + 1, j - 1));
            }
        return edges;
    }

    const RevolvedLayout& L = layout_;
    const int R = L.ring_rows, C = L.cols;
    for (int c = 0; c < C; ++c) add(0, L.vertex_of(0, c)); // pole fan
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            const int v = L.vertex_of(r, c);
            add(v, L.vertex_of(r, c + 1));
            if (r + 1 < R) {
                add(v, L.vertex_of(r + 1, c));
                add(v, L.vertex_of(r + 1, c + 1));
                add(v, L.vertex_of(r + 1, c - 1));
            }
        }
    if (L.north_pole) {
        const int np = vertex_count() - 1;
        for (int c = 0; c < C; ++c) add(np, L.vertex_of(R - 1, c));
    }
    return edges;
}

std::vector<std::array<int, 3>> DiscreteSurface::triangles() const {
    std::vector<std::array<int, 3>> tris;
    if (kind_ == Kind::Graph) {
        const GridDomain& d = *gdomain_;
        for (int j = 0; j + 1 < d.ny(); ++j)
            for (int i = 0; i + 1 < d.nx(); ++i) {
                const int a = node_vertex_[d.index(i, j)];
                const int b = node_vertex_[d.index(i + 1, j)];
                const int c = node_vertex_[d.index(i, j + 1)];
                const int e = node_vertex_[d.index(i + 1, j + 1)];
                if (a >= 0 && b >= 0 && c >= 0) tris.push_back({a, b, c});
                if (b >= 0 && e >= 0 && c >= 0) tris.push_back({b, e, c});
                if (a >= 0 && b >= 0 && e >= 0) tris.push_back({a, b, e});
                if (a >= 0 && e >= 0 && c >= 0) tris.push_back({a, e, c});
            }
        return tris;
    }
    const RevolvedLayout& L = layout_;
    const int R = L.ring_rows, C = L.cols;
    for (int c = 0; c < C; ++c)
        tris.push_back({0, L.vertex_of(0, c), L.vertex_of(0, c + 1)});
    for (int r = 0; r + 1 < R; ++r)
        for (int c = 0; c < C; ++c) {
            const int a = L.vertex_of(r, c), b = L.vertex_of(r, c + 1);
            const int e = L.vertex_of(r + 1, c), f = L.vertex_of(r + 1, c + 1);
            tris.push_back({a, b, e});
            tris.push_back({b, f, e});
            tris.push_back({a, b, f});
            tris.push_back({a, f, e});
        }
    if (L.north_pole) {
        const int np = vertex_count() - 1;
        for (int c = 0; c < C; ++c)
            tris.push_back({np, L.vertex_of(R - 1, c), L.vertex_of(R - 1, c + 1)});
    }
    return tris;
}

} // namespace hsurf
