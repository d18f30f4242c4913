#include "hsurf/grid_domain.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hsurf/error.hpp"

namespace hsurf {

using nlohmann::json;

void GridDomain::classify(const std::function<bool(const Vec2&)>& member,
                          const BoundaryFn& g) {
    roles_.assign(size_t(nx_) * ny_, Role::Outside);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (member(position(i, j))) roles_[index(i, j)] = Role::Boundary;

    // Interior = inside with all four axis neighbors inside.
    auto inside_raw = [&](int i, int j) {
        return i >= 0 && i < nx_ && j >= 0 && j < ny_ &&
               roles_[index(i, j)] != Role::Outside;
    };
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            if (roles_[index(i, j)] == Role::Outside) continue;
            if (inside_raw(i - 1, j) && inside_raw(i + 1, j) && inside_raw(i, j - 1) &&
                inside_raw(i, j + 1))
                roles_[index(i, j)] = Role::Interior;
        }

    unknown_ids_.assign(size_t(nx_) * ny_, -1);
    interior_nodes_.clear();
    boundary_nodes_.clear();
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            if (roles_[index(i, j)] == Role::Interior) {
                unknown_ids_[index(i, j)] = int(interior_nodes_.size());
                interior_nodes_.emplace_back(i, j);
            } else if (roles_[index(i, j)] == Role::Boundary) {
                boundary_nodes_.emplace_back(i, j);
            }
        }
    if (interior_nodes_.empty())
        throw MeshError("domain has no interior nodes at this spacing");

    boundary_values_.assign(size_t(nx_) * ny_, 0.0);
    set_boundary_values(g);
}

void GridDomain::set_boundary_values(const BoundaryFn& g) {
    for (const auto& [i, j] : boundary_nodes_) {
        const double v = g ? g(position(i, j)) : 0.0;
        if (!std::isfinite(v)) throw MeshError("non-finite boundary value");
        boundary_values_[index(i, j)] = v;
    }
}

GridDomain GridDomain::rectangle(const Vec2& lo, const Vec2& hi, double spacing,
                                 const BoundaryFn& g) {
    if (spacing <= 0 || hi.x() <= lo.x() || hi.y() <= lo.y())
        throw ConfigError("invalid rectangle domain");
    GridDomain d;
    d.h_ = spacing;
    d.nx_ = int(std::round((hi.x() - lo.x()) / spacing)) + 1;
    d.ny_ = int(std::round((hi.y() - lo.y()) / spacing)) + 1;
    d.x0_ = lo.x();
    d.y0_ = lo.y();
    d.classify([](const Vec2&) { return true; }, g);
    return d;
}

GridDomain GridDomain::disk(const Vec2& center, double radius, double spacing,
                            const BoundaryFn& g) {
    return disk_union({{center, radius}}, spacing, g);
}

GridDomain GridDomain::disk_union(const std::vector<std::pair<Vec2, double>>& disks,
                                  double spacing, const BoundaryFn& g) {
    if (disks.empty()) throw ConfigError("disk_union needs at least one disk");
    if (spacing <= 0) throw ConfigError("spacing must be positive");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [c, r] : disks) {
        if (r <= 0) throw ConfigError("disk radius must be positive");
        xmin = std::min(xmin, c.x() - r);
        xmax = std::max(xmax, c.x() + r);
        ymin = std::min(ymin, c.y() - r);
        ymax = std::max(ymax, c.y() + r);
    }
    GridDomain d;
    d.h_ = spacing;
    d.x0_ = xmin - spacing;
    d.y0_ = ymin - spacing;
    d.nx_ = int(std::ceil((xmax - d.x0_) / spacing)) + 2;
    d.ny_ = int(std::ceil((ymax - d.y0_) / spacing)) + 2;
    // Round-to-nearest rasterization: membership within half a cell of the
    // circle keeps the stair-step boundary centered on it, which removes
    // the O(h) inward bias of a plain <= r mask.
    d.classify(
        [&](const Vec2& p) {
            for (const auto& [c, r] : disks)
                if ((p - c).norm() <= r + 0.5 * spacing) return true;
            return false;
        },
        g);
    return d;
}

GridDomain GridDomain::from_json(const json& spec) {
    if (!spec.is_object()) throw ConfigError("domain spec must be a JSON object");
    for (auto it = spec.begin(); it != spec.end(); ++it) {
        static const char* keys[] = {"type",   "spacing", "x0",     "y0",    "x1",
                                     "y1",     "center",  "radius", "disks", "boundary"};
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in domain spec");
    }
    const std::string type = spec.at("type").get<std::string>();
    const double h = spec.at("spacing").get<double>();

    BoundaryFn g;
    if (spec.contains("boundary")) {
        const json& b = spec.at("boundary");
        const std::string kind = b.at("kind").get<std::string>();
        if (kind == "zero") {
            g = nullptr;
        } else if (kind == "constant") {
            const double v = b.at("value").get<double>();
            g = [v](const Vec2&) { return v; };
        } else if (kind == "cap") {
            // Exact graph with constant curvature H0 over a disk of radius R,
            // zero on |p| = R, hanging below the plane.
            const double H0 = b.at("H0").get<double>();
            const double R = spec.value("radius", 0.0);
            if (H0 <= 0 || H0 * R > 1)
                throw ConfigError("cap boundary requires 0 < H0 and H0*radius <= 1");
            Vec2 c(0, 0);
            if (spec.contains("center"))
                c = Vec2(spec["center"][0].get<double>(), spec["center"][1].get<double>());
            g = [H0, R, c](const Vec2& p) {
                const double r = (p - c).norm();
                const double rr = std::min(r * H0, 1.0);
                return (std::sqrt(1.0 - H0 * H0 * R * R) - std::sqrt(1.0 - rr * rr)) / H0;
            };
        } else {
            throw ConfigError("unknown boundary kind '" + kind + "'");
        }
    }

    if (type == "rectangle") {
        return rectangle(Vec2(spec.at("x0").get<double>(), spec.at("y0").get<double>()),
                         Vec2(spec.at("x1").get<double>(), spec.at("y1").get<double>()),
                         h, g);
    }
    if (type == "disk") {
        Vec2 c(0, 0);
        if (spec.contains("center"))
            c = Vec2(spec["center"][0].get<double>(), spec["center"][1].get<double>());
        return disk(c, spec.at("radius").get<double>(), h, g);
    }
    if (type == "disks") {
        std::vector<std::pair<Vec2, double>> disks;
        for (const auto& dj : spec.at("disks"))
            disks.emplace_back(
                Vec2(dj.at("center")[0].get<double>(), dj.at("center")[1].get<double>()),
                dj.at("radius").get<double>());
        return disk_union(disks, h, g);
    }
    throw ConfigError("unknown domain type '" + type + "'");
}

nlohmann::json GridDomain::to_json() const {
    json j;
    j["spacing"] = h_;
    j["nx"] = nx_;
    j["ny"] = ny_;
    j["interior_nodes"] = interior_nodes_.size();
    j["boundary_nodes"] = boundary_nodes_.size();
    return j;
}

namespace {

template <typename Shift>
double directional_diff(const GridDomain& d, const VecX& u, int i, int j, Shift at) {
    const double h = d.spacing();
    const auto in = [&](int k) {
        auto [a, b] = at(k);
        return d.inside(a, b);
    };
    const auto val = [&](int k) {
        auto [a, b] = at(k);
        return u[d.index(a, b)];
    };
    if (in(1) && in(-1)) return (val(1) - val(-1)) / (2 * h);
    if (in(1)) {
        if (in(2)) return (-3 * val(0) + 4 * val(1) - val(2)) / (2 * h);
        return (val(1) - val(0)) / h;
    }
    if (in(-1)) {
        if (in(-2)) return (3 * val(0) - 4 * val(-1) + val(-2)) / (2 * h);
        return (val(0) - val(-1)) / h;
    }
    return 0.0;
}

template <typename Shift>
void directional_weights(const GridDomain& d, int i, int j, Shift at,
                         std::vector<std::pair<int, double>>& out) {
    const double h = d.spacing();
    const auto in = [&](int k) {
        auto [a, b] = at(k);
        return d.inside(a, b);
    };
    const auto idx = [&](int k) {
        auto [a, b] = at(k);
        return d.index(a, b);
    };
    if (in(1) && in(-1)) {
        out.emplace_back(idx(1), 1.0 / (2 * h));
        out.emplace_back(idx(-1), -1.0 / (2 * h));
    } else if (in(1)) {
        if (in(2)) {
            out.emplace_back(idx(0), -1.5 / h);
            out.emplace_back(idx(1), 2.0 / h);
            out.emplace_back(idx(2), -0.5 / h);
        } else {
            out.emplace_back(idx(1), 1.0 / h);
            out.emplace_back(idx(0), -1.0 / h);
        }
    } else if (in(-1)) {
        if (in(-2)) {
            out.emplace_back(idx(0), 1.5 / h);
            out.emplace_back(idx(-1), -2.0 / h);
            out.emplace_back(idx(-2), 0.5 / h);
        } else {
            out.emplace_back(idx(0), 1.0 / h);
            out.emplace_back(idx(-1), -1.0 / h);
        }
    }
}

} // namespace

double grid_dx(const GridDomain& d, const VecX& u, int i, int j) {
    return directional_diff(d, u, i, j,
                            [&](int k) { return std::pair(i + k, j); });
}

double grid_dy(const GridDomain& d, const VecX& u, int i, int j) {
    return directional_diff(d, u, i, j,
                            [&](int k) { return std::pair(i, j + k); });
}

void grid_dx_weights(const GridDomain& d, int i, int j,
                     std::vector<std::pair<int, double>>& out) {
    directional_weights(d, i, j, [&](int k) { return std::pair(i + k, j); }, out);
}

void grid_dy_weights(const GridDomain& d, int i, int j,
                     std::vector<std::pair<int, double>>& out) {
    directional_weights(d, i, j, [&](int k) { return std::pair(i, j + k); }, out);
}

} // namespace hsurf
