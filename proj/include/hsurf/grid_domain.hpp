#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hsurf/types.hpp"

namespace hsurf {

/// Masked uniform grid with stair-step Dirichlet boundary.  Interior
/// nodes have all four axis neighbors inside the mask; inside nodes that
/// are not interior carry nodal boundary values.
class GridDomain {
public:
    using BoundaryFn = std::function<double(const Vec2&)>;

    enum class Role : std::int8_t { Outside = 0, Interior = 1, Boundary = 2 };

    static GridDomain rectangle(const Vec2& lo, const Vec2& hi, double spacing,
                                const BoundaryFn& g = nullptr);
    static GridDomain disk(const Vec2& center, double radius, double spacing,
                           const BoundaryFn& g = nullptr);
    /// Union of disks (possibly disconnected).
    static GridDomain disk_union(const std::vector<std::pair<Vec2, double>>& disks,
                                 double spacing, const BoundaryFn& g = nullptr);
    static GridDomain from_json(const nlohmann::json& spec);

    double spacing() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int node_count() const { return nx_ * ny_; }
    int unknown_count() const { return int(interior_nodes_.size()); }

    int index(int i, int j) const { return j * nx_ + i; }
    Vec2 position(int i, int j) const { return {x0_ + i * h_, y0_ + j * h_}; }
    Role role(int i, int j) const { return roles_[index(i, j)]; }
    bool inside(int i, int j) const {
        return i >= 0 && i < nx_ && j >= 0 && j < ny_ &&
               roles_[index(i, j)] != Role::Outside;
    }
    bool interior(int i, int j) const {
        return i >= 0 && i < nx_ && j >= 0 && j < ny_ &&
               roles_[index(i, j)] == Role::Interior;
    }

    /// Unknown id of an interior node, -1 otherwise.
    int unknown_id(int i, int j) const { return unknown_ids_[index(i, j)]; }
    const std::vector<std::pair<int, int>>& interior_nodes() const {
        return interior_nodes_;
    }
    const std::vector<std::pair<int, int>>& boundary_nodes() const {
        return boundary_nodes_;
    }
    double boundary_value(int i, int j) const { return boundary_values_[index(i, j)]; }

    /// Replace boundary data (same mask).
    void set_boundary_values(const BoundaryFn& g);

    nlohmann::json to_json() const;

private:
    GridDomain() = default;
    void classify(const std::function<bool(const Vec2&)>& member, const BoundaryFn& g);

    double h_ = 0.0;
    double x0_ = 0.0, y0_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<Role> roles_;
    std::vector<double> boundary_values_;
    std::vector<int> unknown_ids_;
    std::vector<std::pair<int, int>> interior_nodes_;
    std::vector<std::pair<int, int>> boundary_nodes_;
};

/// First differences on a masked grid: centered where both neighbors are
/// inside; at stair-step nodes a second-order one-sided formula when two
/// nodes are available, first-order otherwise.
double grid_dx(const GridDomain& d, const VecX& u, int i, int j);
double grid_dy(const GridDomain& d, const VecX& u, int i, int j);
/// Stencil weights of the same differences, appended as (node, weight).
void grid_dx_weights(const GridDomain& d, int i, int j,
                     std::vector<std::pair<int, double>>& out);
void grid_dy_weights(const GridDomain& d, int i, int j,
                     std::vector<std::pair<int, double>>& out);

} // namespace hsurf
