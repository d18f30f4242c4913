#include "hsurf/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "hsurf/error.hpp"

namespace hsurf {

namespace {

// First-arrival relaxation through the segment [a, b]: the wavefront value
// at v is min over the segment of T(interpolated) + straight-line distance.
double segment_update(const Vec3& pv, const Vec3& pa, const Vec3& pb, double ta,
                      double tb) {
    const Vec3 w = pv - pa;
    const Vec3 d = pb - pa;
    const double u = tb - ta;
    const double dd = d.squaredNorm();
    double best = std::min(ta + w.norm(), tb + (pv - pb).norm());
    if (dd < 1e-30) return best;

    // Stationary point of  f(l) = ta + l u + |w - l d|  on (0,1):
    // u |w - l d| = -d.(w - l d), squared -> quadratic in l.
    const double dw = d.dot(w);
    const double a2 = dd * (dd - u * u);
    const double b2 = 2.0 * dw * (u * u - dd);
    const double c2 = dw * dw - u * u * w.squaredNorm();
    if (std::abs(a2) > 1e-30) {
        const double disc = b2 * b2 - 4.0 * a2 * c2;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (double l : {(-b2 + sq) / (2 * a2), (-b2 - sq) / (2 * a2)}) {
                if (l <= 0.0 || l >= 1.0 || !std::isfinite(l)) continue;
                best = std::min(best, ta + l * u + (w - l * d).norm());
            }
        }
    }
    return best;
}

} // namespace

std::vector<double> geodesic_distance(const DiscreteSurface& surface,
                                      const std::vector<int>& sources) {
    const int n = surface.vertex_count();
    if (sources.empty()) throw ConfigError("geodesic distance needs source vertices");
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : surface.metric_edges()) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int s : sources) {
        dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
        auto [dv, v] = heap.top();
        heap.pop();
        if (dv > dist[v]) continue;
        for (auto [w, len] : adj[v]) {
            if (dv + len < dist[w]) {
                dist[w] = dv + len;
                heap.emplace(dist[w], w);
            }
        }
    }

    // One corrective sweep: revisit vertices in increasing distance order
    // and relax through incident triangle segments.
    std::vector<std::vector<std::pair<int, int>>> corners(n);
    for (const auto& t : surface.triangles()) {
        corners[t[0]].emplace_back(t[1], t[2]);
        corners[t[1]].emplace_back(t[0], t[2]);
        corners[t[2]].emplace_back(t[0], t[1]);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    for (int v : order) {
        for (auto [a, b] : corners[v]) {
            if (std::min(dist[a], dist[b]) >= dist[v]) continue;
            if (!std::isfinite(dist[a]) || !std::isfinite(dist[b])) continue;
            dist[v] = std::min(dist[v],
                               segment_update(surface.position(v), surface.position(a),
                                              surface.position(b), dist[a], dist[b]));
        }
    }
    return dist;
}

std::vector<double> boundary_distance(const DiscreteSurface& surface) {
    if (surface.boundary_vertices().empty())
        throw GeometryError("surface has no boundary");
    return geodesic_distance(surface, surface.boundary_vertices());
}

double intrinsic_radius(const DiscreteSurface& surface) {
    const auto d = boundary_distance(surface);
    double r = 0.0;
    for (double v : d) r = std::max(r, v);
    return r;
}

} // namespace hsurf
