#pragma once

#include <string>
#include <vector>

#include "hsurf/curvature_field.hpp"
#include "hsurf/grid_domain.hpp"
#include "hsurf/types.hpp"

namespace hsurf {

struct GraphSolveOptions {
    double tolerance_scale = 1e-9; // residual inf-norm <= scale * max(1, 2 max|H|)
    int max_newton_iterations = 60;
    int max_continuation_stages = 10;
    bool use_continuation = true;  // ramp lambda*H when cold-starting
    double armijo_c1 = 1e-4;
    double min_step = 1e-10;       // line search floor -> stagnation
};

/// Discrete solution of div(Du / sqrt(1+|Du|^2)) = n H(Z_u), n = 2, on a
/// masked grid with nodal Dirichlet data.  The mass-conserving 9-point
/// divergence form is used, so the mean curvature derived from it matches
/// H(Z_u) to solver tolerance at every interior node.
class GraphSolution {
public:
    GraphSolution(GridDomain domain, VecX values);

    const GridDomain& domain() const { return domain_; }
    double value(int i, int j) const { return u_[domain_.index(i, j)]; }
    const VecX& values() const { return u_; }

    bool converged = false;
    std::string status = "unsolved"; // converged | stalled | max-iterations
    int newton_iterations = 0;
    double residual_norm = 0.0;      // inf-norm of the discrete equation
    double continuation_lambda = 1.0;

    /// Gradient Du by centered differences (one-sided at stair-step
    /// nodes), or the stored per-node gradient when one was attached by
    /// restrict_to_rectangle.
    Vec2 du(int i, int j) const;
    /// Attach per-node gradients (e.g. from a parent solve whose stencils
    /// are centered everywhere on this patch).
    void set_gradient_field(std::vector<Vec2> du_nodes);
    /// Upward unit normal Z_u = (-Du, 1)/W.
    Vec3 upward_normal(int i, int j) const;
    /// Mean curvature from the discrete divergence form (interior only).
    double mean_curvature(int i, int j) const;
    /// Shape-operator quantities from centered second differences.
    struct Curvatures {
        double h;       // mean
        double k;       // Gauss
        double sigma2;  // |sigma|^2 = 4h^2 - 2k
        double kappa1, kappa2;
    };
    Curvatures curvatures(int i, int j) const;

    double max_abs_height() const;

private:
    GridDomain domain_;
    VecX u_;
    std::vector<Vec2> du_override_; // per node, empty unless attached
};

GraphSolution solve_dirichlet(const CurvatureField& field, const GridDomain& domain,
                              const VecX* init = nullptr,
                              const GraphSolveOptions& opts = {});

/// Restriction of a solved graph to an axis-aligned sub-rectangle of the
/// same lattice.  The restricted boundary ring carries the parent values,
/// so the patch has no stair-step nodes and smooth data up to its edge
/// (useful for interior-patch studies of translator and cap graphs).
GraphSolution restrict_to_rectangle(const GraphSolution& sol, const Vec2& lo,
                                    const Vec2& hi);

/// Signed weighted-curvature residual H_phi - n b per interior node, with
/// H_phi = n H_Sigma - <eta, Dphi> for the vertical density phi = n x3.
/// For H(x) = <x,e3> + b the residual vanishes identically in the
/// continuum; discretely it is bounded by the solver residual.
struct SolitonResidual {
    std::vector<double> values; // per interior node, domain order
    double max_abs = 0.0;
};
SolitonResidual soliton_residual(const GraphSolution& sol, double b);

struct LevelSetComponent {
    int node_count = 0;
    double diameter = 0.0;       // Euclidean diameter of the surface patch
    std::pair<int, int> seed;    // a representative grid node
};

/// Connected components of {|u| >= t} by grid flood fill.
std::vector<LevelSetComponent> level_set_components(const GraphSolution& sol, double t);

struct HeightEntry {
    double domain_size = 0.0;   // disk radius
    double max_height = 0.0;    // max |u|
    bool converged = false;
    std::string status;
};

struct HeightExperiment {
    std::vector<HeightEntry> entries;
    double supremum = 0.0;       // over converged entries
    bool saturated = false;      // last converged increment < saturation_tol
    double last_increment = 0.0;
    bool item5_holds = false;    // max H < 2 min H on the equator circle
    double item5_margin = 0.0;
};

/// Solves the zero-boundary Dirichlet problem over growing disks and
/// tabulates max heights.  Nonconvergence is recorded, not fatal.
HeightExperiment height_experiment(const CurvatureField& field,
                                   const std::vector<double>& radii, double spacing,
                                   double saturation_tol = 1e-4,
                                   const GraphSolveOptions& opts = {});

struct CurvatureDiagnostic {
    double value = 0.0;         // sup over nodes of |sigma| * d(p, boundary)
    std::pair<int, int> argmax; // grid node attaining it
};

/// sup_p |sigma(p)| d(p, dSigma) with the intrinsic distance taken on the
/// solved graph (Dijkstra with one corrective sweep).
CurvatureDiagnostic curvature_diagnostic(const GraphSolution& sol);

} // namespace hsurf
