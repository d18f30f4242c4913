#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hsurf/graph_solver.hpp"
#include "hsurf/grid_domain.hpp"
#include "hsurf/profile_curve.hpp"
#include "hsurf/types.hpp"

namespace hsurf {

/// Parametric grid surface with per-vertex geometry: unit normal, an
/// orthonormal tangent frame aligned with the principal directions,
/// principal curvatures, and a quadrature area weight.
///
/// Two layouts exist:
///  - Graph: the masked grid of a solved (or explicit) graph z = u(x,y);
///  - Revolved: a lat-long grid over a meridian profile, with poles kept
///    as single vertices.
class DiscreteSurface {
public:
    enum class Kind { Graph, Revolved };

    struct RevolvedLayout {
        int ring_rows = 0;  // rows of full rings, poles excluded
        int cols = 0;
        bool south_pole = false; // vertex 0
        bool north_pole = false; // last vertex
        bool closed = false;
        std::vector<double> row_s, row_x, row_z, row_theta;
        std::vector<double> row_kappa_meridian, row_kappa_parallel;

        int vertex_of(int ring, int col) const {
            return (south_pole ? 1 : 0) + ring * cols + ((col % cols + cols) % cols);
        }
    };

    static DiscreteSurface from_graph(const GraphSolution& sol);
    /// Revolves a meridian profile. boundary_at_end marks the last ring as
    /// a Dirichlet boundary (profile not reaching the far pole).
    static DiscreteSurface revolve(const ProfileCurve& profile, const ZonalProfile& zonal,
                                   int ring_rows, int cols, bool boundary_at_end);
    static DiscreteSurface round_sphere(double radius, int ring_rows, int cols);
    /// Flat disk z = 0 (handy as a pure-Laplacian reference surface).
    static DiscreteSurface flat_disk(double radius, double spacing);

    Kind kind() const { return kind_; }
    bool closed() const { return closed_; }
    int vertex_count() const { return int(positions_.size()); }

    const Vec3& position(int v) const { return positions_[v]; }
    const Vec3& normal(int v) const { return normals_[v]; }
    const Vec3& tangent1(int v) const { return t1_[v]; } // principal direction 1
    const Vec3& tangent2(int v) const { return t2_[v]; }
    double kappa1(int v) const { return kappa1_[v]; }
    double kappa2(int v) const { return kappa2_[v]; }
    double mean_curvature(int v) const { return 0.5 * (kappa1_[v] + kappa2_[v]); }
    double gauss_curvature(int v) const { return kappa1_[v] * kappa2_[v]; }
    double sigma2(int v) const {
        return kappa1_[v] * kappa1_[v] + kappa2_[v] * kappa2_[v];
    }
    double vertex_area(int v) const { return areas_[v]; }
    double total_area() const;
    bool is_boundary(int v) const { return boundary_[v]; }
    const std::vector<int>& boundary_vertices() const { return boundary_list_; }
    int interior_count() const { return vertex_count() - int(boundary_list_.size()); }

    /// Grid coordinates: (i,j) node for graphs, (ring,col) for revolved
    /// (poles report ring -1 / ring_rows).
    std::pair<int, int> grid_coords(int v) const { return coords_[v]; }

    // Layout access for operator assembly.
    const GridDomain* graph_domain() const {
        return kind_ == Kind::Graph ? &*gdomain_ : nullptr;
    }
    const VecX* graph_values() const { return kind_ == Kind::Graph ? &gvalues_ : nullptr; }
    int vertex_of_node(int i, int j) const { return node_vertex_[gdomain_->index(i, j)]; }
    const RevolvedLayout* revolved() const {
        return kind_ == Kind::Revolved ? &layout_ : nullptr;
    }

    struct Edge {
        int a, b;
        double length;
    };
    /// 8-connected metric edge graph (chordal lengths).
    std::vector<Edge> metric_edges() const;
    /// Triangles of the grid (for corrective geodesic sweeps).
    std::vector<std::array<int, 3>> triangles() const;

private:
    Kind kind_ = Kind::Graph;
    bool closed_ = false;
    std::vector<Vec3> positions_, normals_, t1_, t2_;
    std::vector<double> kappa1_, kappa2_, areas_;
    std::vector<char> boundary_;
    std::vector<int> boundary_list_;
    std::vector<std::pair<int, int>> coords_;

    std::optional<GridDomain> gdomain_;
    VecX gvalues_;
    std::vector<int> node_vertex_;

    RevolvedLayout layout_;

    void finalize_boundary_list();
};

} // namespace hsurf
