#include "hsurf/graph_solver.hpp"

#include <cmath>
#include <deque>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "hsurf/discrete_surface.hpp"
#include "hsurf/error.hpp"
#include "hsurf/geodesic.hpp"
#include "hsurf/parallel.hpp"

namespace hsurf {

namespace {

// Tangential derivatives on the masked grid (shared helpers; centered in
// the interior, one-sided at stair-step nodes).
double dy_at(const GridDomain& d, const VecX& u, int i, int j) {
    return grid_dy(d, u, i, j);
}

double dx_at(const GridDomain& d, const VecX& u, int i, int j) {
    return grid_dx(d, u, i, j);
}

void dy_weights(const GridDomain& d, int i, int j,
                std::vector<std::pair<int, double>>& out) {
    grid_dy_weights(d, i, j, out);
}

void dx_weights(const GridDomain& d, int i, int j,
                std::vector<std::pair<int, double>>& out) {
    grid_dx_weights(d, i, j, out);
}

// Divergence form of the mean curvature operator at an interior node:
// sum of the four face fluxes of Du/W divided by h.
double divergence_term(const GridDomain& d, const VecX& u, int i, int j);

struct FaceFlux {
    double flux;
    double dflux_dp, dflux_dq;
    double p, q;
};

FaceFlux face_flux(double ua, double ub, double qa, double qb, double h) {
    FaceFlux f;
    f.p = (ub - ua) / h;
    f.q = 0.5 * (qa + qb);
    const double w2 = 1.0 + f.p * f.p + f.q * f.q;
    const double w = std::sqrt(w2);
    f.flux = f.p / w;
    f.dflux_dp = (1.0 + f.q * f.q) / (w2 * w);
    f.dflux_dq = -f.p * f.q / (w2 * w);
    return f;
}

double divergence_term(const GridDomain& d, const VecX& u, int i, int j) {
    const double h = d.spacing();
    const double qc = dy_at(d, u, i, j);
    const double pc = dx_at(d, u, i, j);
    const auto e = face_flux(u[d.index(i, j)], u[d.index(i + 1, j)], qc,
                             dy_at(d, u, i + 1, j), h);
    const auto w = face_flux(u[d.index(i - 1, j)], u[d.index(i, j)],
                             dy_at(d, u, i - 1, j), qc, h);
    // North/south faces: the tangential direction is x.
    const auto n = face_flux(u[d.index(i, j)], u[d.index(i, j + 1)], pc,
                             dx_at(d, u, i, j + 1), h);
    const auto s = face_flux(u[d.index(i, j - 1)], u[d.index(i, j)],
                             dx_at(d, u, i, j - 1), pc, h);
    return (e.flux - w.flux + n.flux - s.flux) / h;
}

class DiscreteOperator {
public:
    DiscreteOperator(const CurvatureField& field, const GridDomain& domain)
        : field_(field), d_(domain) {}

    // Residual of the divergence-form equation at every interior node.
    VecX residual(const VecX& u, double lambda) const {
        const auto& nodes = d_.interior_nodes();
        VecX r(nodes.size());
        parallel_for(0, std::ptrdiff_t(nodes.size()), [&](std::ptrdiff_t k) {
            const auto [i, j] = nodes[k];
            r[k] = divergence_term(u, i, j) - 2.0 * lambda * rhs_curvature(u, i, j);
        });
        return r;
    }

    double divergence_term(const VecX& u, int i, int j) const {
        return hsurf::divergence_term(d_, u, i, j);
    }

    Vec3 node_normal(const VecX& u, int i, int j) const {
        const double p = dx_at(d_, u, i, j);
        const double q = dy_at(d_, u, i, j);
        const double w = std::sqrt(1.0 + p * p + q * q);
        return Vec3(-p / w, -q / w, 1.0 / w);
    }

    double rhs_curvature(const VecX& u, int i, int j) const {
        return field_.eval(node_normal(u, i, j));
    }

    // Jacobian with respect to interior unknowns (Dirichlet nodes fixed).
    SparseMat jacobian(const VecX& u, double lambda) const {
        const auto& nodes = d_.interior_nodes();
        const double h = d_.spacing();
        std::vector<std::vector<Triplet>> rows(nodes.size());

        parallel_for(0, std::ptrdiff_t(nodes.size()), [&](std::ptrdiff_t k) {
            const auto [i, j] = nodes[k];
            auto& row = rows[k];
            std::vector<std::pair<int, double>> tang;
            tang.reserve(4);
            auto add = [&](int node, double w) {
                const auto [ni, nj] = std::pair(node % d_.nx(), node / d_.nx());
                const int id = d_.unknown_id(ni, nj);
                if (id >= 0) row.emplace_back(int(k), id, w);
            };

            // Four faces; sign is +1 for east/north, -1 for west/south.
            const int c = d_.index(i, j);
            struct Face { int a, b, ta, tb; bool xdir; double sign; };
            const Face faces[4] = {
                {c, d_.index(i + 1, j), 0, 0, true, +1.0},
                {d_.index(i - 1, j), c, 0, 0, true, -1.0},
                {c, d_.index(i, j + 1), 0, 0, false, +1.0},
                {d_.index(i, j - 1), c, 0, 0, false, -1.0},
            };
            for (const Face& f : faces) {
                const int ai = f.a % d_.nx(), aj = f.a / d_.nx();
                const int bi = f.b % d_.nx(), bj = f.b / d_.nx();
                double qa, qb;
                if (f.xdir) {
                    qa = dy_at(d_, u, ai, aj);
                    qb = dy_at(d_, u, bi, bj);
                } else {
                    qa = dx_at(d_, u, ai, aj);
                    qb = dx_at(d_, u, bi, bj);
                }
                const auto ff = face_flux(u[f.a], u[f.b], qa, qb, h);
                const double sp = f.sign * ff.dflux_dp / h;
                add(f.b, sp / h);
                add(f.a, -sp / h);
                const double sq = f.sign * ff.dflux_dq / h * 0.5;
                tang.clear();
                if (f.xdir) dy_weights(d_, ai, aj, tang);
                else dx_weights(d_, ai, aj, tang);
                for (auto [node, wgt] : tang) add(node, sq * wgt);
                tang.clear();
                if (f.xdir) dy_weights(d_, bi, bj, tang);
                else dx_weights(d_, bi, bj, tang);
                for (auto [node, wgt] : tang) add(node, sq * wgt);
            }

            // d/du of -2 lambda H(Z_u): chain rule through the normal.
            const double p = dx_at(d_, u, i, j);
            const double q = dy_at(d_, u, i, j);
            const double w = std::sqrt(1.0 + p * p + q * q);
            const Vec3 z(-p / w, -q / w, 1.0 / w);
            const Vec3 g = field_.gradient(z);
            const double dh_dp = -g.x() / w;
            const double dh_dq = -g.y() / w;
            tang.clear();
            dx_weights(d_, i, j, tang);
            for (auto [node, wgt] : tang) add(node, -2.0 * lambda * dh_dp * wgt);
            tang.clear();
            dy_weights(d_, i, j, tang);
            for (auto [node, wgt] : tang) add(node, -2.0 * lambda * dh_dq * wgt);
        });

        std::vector<Triplet> trip;
        size_t total = 0;
        for (const auto& r : rows) total += r.size();
        trip.reserve(total);
        for (const auto& r : rows) trip.insert(trip.end(), r.begin(), r.end());
        SparseMat jac(nodes.size(), nodes.size());
        jac.setFromTriplets(trip.begin(), trip.end());
        return jac;
    }

private:
    const CurvatureField& field_;
    const GridDomain& d_;
};

VecX solve_linear(const SparseMat& a, const VecX& b) {
    if (a.rows() <= 250000) {
        Eigen::SparseLU<SparseMat> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw Error("sparse factorization failed in Newton step");
        return lu.solve(b);
    }
    Eigen::BiCGSTAB<SparseMat, Eigen::IncompleteLUT<double>> krylov;
    krylov.setTolerance(1e-10);
    krylov.compute(a);
    VecX x = krylov.solve(b);
    if (krylov.info() != Eigen::Success)
        throw Error("iterative linear solve failed in Newton step");
    return x;
}

// Newton with Armijo backtracking at fixed continuation weight.
struct StageResult {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

StageResult newton_stage(const DiscreteOperator& op, const GridDomain& d, VecX& u,
                         double lambda, double tol, const GraphSolveOptions& opts) {
    StageResult out;
    VecX r = op.residual(u, lambda);
    for (int it = 0; it < opts.max_newton_iterations; ++it) {
        out.residual = r.lpNorm<Eigen::Infinity>();
        if (out.residual <= tol) {
            out.converged = true;
            return out;
        }
        const SparseMat jac = op.jacobian(u, lambda);
        const VecX delta = solve_linear(jac, -r);
        if (!delta.allFinite()) break;

        const double merit0 = 0.5 * r.squaredNorm();
        double step = 1.0;
        bool accepted = false;
        while (step >= opts.min_step) {
            VecX trial = u;
            for (size_t k = 0; k < d.interior_nodes().size(); ++k) {
                const auto [i, j] = d.interior_nodes()[k];
                trial[d.index(i, j)] += step * delta[k];
            }
            const VecX rt = op.residual(trial, lambda);
            if (0.5 * rt.squaredNorm() <= (1.0 - 2.0 * opts.armijo_c1 * step) * merit0) {
                u = trial;
                r = rt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++out.iterations;
        if (!accepted) return out; // stagnation: no step achieves decrease
    }
    out.residual = r.lpNorm<Eigen::Infinity>();
    out.converged = out.residual <= tol;
    return out;
}

} // namespace

GraphSolution::GraphSolution(GridDomain domain, VecX values)
    : domain_(std::move(domain)), u_(std::move(values)) {}

Vec2 GraphSolution::du(int i, int j) const {
    if (!du_override_.empty()) return du_override_[domain_.index(i, j)];
    return {dx_at(domain_, u_, i, j), dy_at(domain_, u_, i, j)};
}

void GraphSolution::set_gradient_field(std::vector<Vec2> du_nodes) {
    if (int(du_nodes.size()) != domain_.node_count())
        throw ConfigError("gradient field has wrong size");
    du_override_ = std::move(du_nodes);
}

Vec3 GraphSolution::upward_normal(int i, int j) const {
    const Vec2 g = du(i, j);
    const double w = std::sqrt(1.0 + g.squaredNorm());
    return Vec3(-g.x() / w, -g.y() / w, 1.0 / w);
}

double GraphSolution::mean_curvature(int i, int j) const {
    if (!domain_.interior(i, j))
        throw MeshError("mean curvature is defined at interior nodes");
    // One half of the discrete divergence form, so that the solved
    // equation reads H = H(Z_u) exactly up to the Newton residual.
    return 0.5 * divergence_term(domain_, u_, i, j);
}

GraphSolution::Curvatures GraphSolution::curvatures(int i, int j) const {
    if (!domain_.interior(i, j))
        throw MeshError("curvatures are defined at interior nodes");
    const double h = domain_.spacing();
    const auto& d = domain_;
    const double uc = u_[d.index(i, j)];
    const double uxx = (u_[d.index(i + 1, j)] - 2 * uc + u_[d.index(i - 1, j)]) / (h * h);
    const double uyy = (u_[d.index(i, j + 1)] - 2 * uc + u_[d.index(i, j - 1)]) / (h * h);
    double uxy;
    if (d.inside(i + 1, j + 1) && d.inside(i - 1, j - 1) && d.inside(i + 1, j - 1) &&
        d.inside(i - 1, j + 1)) {
        uxy = (u_[d.index(i + 1, j + 1)] + u_[d.index(i - 1, j - 1)] -
               u_[d.index(i + 1, j - 1)] - u_[d.index(i - 1, j + 1)]) /
              (4 * h * h);
    } else {
        uxy = (du(i + 1, j).y() - du(i - 1, j).y()) / (2 * h);
    }
    const Vec2 g = du(i, j);
    const double p = g.x(), q = g.y();
    const double w2 = 1.0 + p * p + q * q;
    const double w = std::sqrt(w2);

    Curvatures c{};
    c.h = ((1 + q * q) * uxx - 2 * p * q * uxy + (1 + p * p) * uyy) / (2 * w2 * w);
    c.k = (uxx * uyy - uxy * uxy) / (w2 * w2);
    c.sigma2 = 4 * c.h * c.h - 2 * c.k;
    const double disc = std::sqrt(std::max(0.0, c.h * c.h - c.k));
    c.kappa1 = c.h + disc;
    c.kappa2 = c.h - disc;
    return c;
}

double GraphSolution::max_abs_height() const {
    double m = 0.0;
    for (const auto& [i, j] : domain_.interior_nodes())
        m = std::max(m, std::abs(u_[domain_.index(i, j)]));
    for (const auto& [i, j] : domain_.boundary_nodes())
        m = std::max(m, std::abs(u_[domain_.index(i, j)]));
    return m;
}

GraphSolution solve_dirichlet(const CurvatureField& field, const GridDomain& domain,
                              const VecX* init, const GraphSolveOptions& opts) {
    VecX u = VecX::Zero(domain.node_count());
    for (const auto& [i, j] : domain.boundary_nodes())
        u[domain.index(i, j)] = domain.boundary_value(i, j);
    if (init) {
        if (init->size() != u.size())
            throw ConfigError("initial guess has wrong size");
        for (const auto& [i, j] : domain.interior_nodes())
            u[domain.index(i, j)] = (*init)[domain.index(i, j)];
    }

    double field_scale = 0.0;
    for (const Vec3& x : fibonacci_sphere(512))
        if (x.z() >= 0.0) field_scale = std::max(field_scale, std::abs(field.eval(x)));
    const double tol = opts.tolerance_scale * std::max(1.0, 2.0 * field_scale);

    DiscreteOperator op(field, domain);

    double lambda_done = 0.0;  // largest weight solved so far
    VecX u_done = u;
    double lambda_try = 1.0;
    int stages = 0;
    StageResult last{};
    double last_lambda = 1.0;

    while (stages < opts.max_continuation_stages) {
        ++stages;
        VecX attempt = u_done;
        last = newton_stage(op, domain, attempt, lambda_try, tol, opts);
        last_lambda = lambda_try;
        if (last.converged) {
            lambda_done = lambda_try;
            u_done = attempt;
            if (lambda_done >= 1.0) break;
            lambda_try = 1.0;
        } else {
            if (!opts.use_continuation) {
                u_done = attempt; // keep the last iterate
                break;
            }
            const double next = 0.5 * (lambda_done + lambda_try);
            if (next - lambda_done < 1e-3) {
                u_done = attempt;
                break;
            }
            lambda_try = next;
        }
    }

    GraphSolution sol(domain, u_done);
    sol.newton_iterations = last.iterations;
    sol.residual_norm = last.residual;
    sol.continuation_lambda = last_lambda;
    sol.converged = last.converged && lambda_done >= 1.0;
    sol.status = sol.converged ? "converged" : "stalled";
    return sol;
}

GraphSolution restrict_to_rectangle(const GraphSolution& sol, const Vec2& lo,
                                    const Vec2& hi) {
    const GridDomain& parent = sol.domain();
    const double h = parent.spacing();
    // Snap the corners onto the parent lattice.
    const Vec2 origin = parent.position(0, 0);
    auto snap = [&](double v, double o) { return o + std::round((v - o) / h) * h; };
    const Vec2 lo_s(snap(lo.x(), origin.x()), snap(lo.y(), origin.y()));
    const Vec2 hi_s(snap(hi.x(), origin.x()), snap(hi.y(), origin.y()));

    GridDomain sub = GridDomain::rectangle(lo_s, hi_s, h);
    const int di = int(std::round((lo_s.x() - origin.x()) / h));
    const int dj = int(std::round((lo_s.y() - origin.y()) / h));

    VecX u = VecX::Zero(sub.node_count());
    for (int j = 0; j < sub.ny(); ++j)
        for (int i = 0; i < sub.nx(); ++i) {
            const int pi = i + di, pj = j + dj;
            if (!parent.inside(pi, pj))
                throw MeshError("restriction rectangle leaves the solved domain");
            u[sub.index(i, j)] = sol.value(pi, pj);
        }
    sub.set_boundary_values([&](const Vec2& p) {
        const int pi = int(std::round((p.x() - origin.x()) / h));
        const int pj = int(std::round((p.y() - origin.y()) / h));
        return sol.value(pi, pj);
    });

    // Gradients from the parent stencils: centered through the whole patch
    // when it sits in the parent interior, so the derivative error stays
    // smooth up to the patch edge.
    std::vector<Vec2> grads(sub.node_count(), Vec2::Zero());
    for (int j = 0; j < sub.ny(); ++j)
        for (int i = 0; i < sub.nx(); ++i)
            grads[sub.index(i, j)] = sol.du(i + di, j + dj);

    GraphSolution out(std::move(sub), std::move(u));
    out.set_gradient_field(std::move(grads));
    out.converged = sol.converged;
    out.status = sol.status;
    out.newton_iterations = sol.newton_iterations;
    out.residual_norm = sol.residual_norm;
    out.continuation_lambda = sol.continuation_lambda;
    return out;
}

SolitonResidual soliton_residual(const GraphSolution& sol, double b) {
    SolitonResidual out;
    const auto& d = sol.domain();
    out.values.reserve(d.interior_nodes().size());
    for (const auto& [i, j] : d.interior_nodes()) {
        const double h2 = 2.0 * sol.mean_curvature(i, j);
        const double eta3 = sol.upward_normal(i, j).z();
        const double r = h2 - 2.0 * eta3 - 2.0 * b;
        out.values.push_back(r);
        out.max_abs = std::max(out.max_abs, std::abs(r));
    }
    return out;
}

std::vector<LevelSetComponent> level_set_components(const GraphSolution& sol, double t) {
    const auto& d = sol.domain();
    std::vector<char> in(d.node_count(), 0), seen(d.node_count(), 0);
    auto qualifies = [&](int i, int j) {
        return d.inside(i, j) && std::abs(sol.value(i, j)) >= t;
    };
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i)
            if (qualifies(i, j)) in[d.index(i, j)] = 1;

    std::vector<LevelSetComponent> comps;
    for (int j0 = 0; j0 < d.ny(); ++j0)
        for (int i0 = 0; i0 < d.nx(); ++i0) {
            if (!in[d.index(i0, j0)] || seen[d.index(i0, j0)]) continue;
            std::vector<std::pair<int, int>> nodes;
            std::deque<std::pair<int, int>> queue{{i0, j0}};
            seen[d.index(i0, j0)] = 1;
            while (!queue.empty()) {
                auto [i, j] = queue.front();
                queue.pop_front();
                nodes.emplace_back(i, j);
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int ni = i + di[k], nj = j + dj[k];
                    if (ni < 0 || ni >= d.nx() || nj < 0 || nj >= d.ny()) continue;
                    if (!in[d.index(ni, nj)] || seen[d.index(ni, nj)]) continue;
                    seen[d.index(ni, nj)] = 1;
                    queue.emplace_back(ni, nj);
                }
            }

            LevelSetComponent comp;
            comp.node_count = int(nodes.size());
            comp.seed = nodes.front();

            std::vector<Vec3> pts;
            if (nodes.size() <= 6000) {
                pts.reserve(nodes.size());
                for (auto [i, j] : nodes)
                    pts.emplace_back(d.position(i, j).x(), d.position(i, j).y(),
                                     sol.value(i, j));
            } else {
                // Large component: the diameter is attained on its rim
                // (plus height extremes).
                auto in_set = [&](int a, int b) {
                    return a >= 0 && a < d.nx() && b >= 0 && b < d.ny() &&
                           in[d.index(a, b)];
                };
                double umin = 1e300, umax = -1e300;
                std::pair<int, int> nmin = nodes[0], nmax = nodes[0];
                for (auto [i, j] : nodes) {
                    const bool rim = !in_set(i - 1, j) || !in_set(i + 1, j) ||
                                     !in_set(i, j - 1) || !in_set(i, j + 1);
                    if (rim)
                        pts.emplace_back(d.position(i, j).x(), d.position(i, j).y(),
                                         sol.value(i, j));
                    const double v = sol.value(i, j);
                    if (v < umin) { umin = v; nmin = {i, j}; }
                    if (v > umax) { umax = v; nmax = {i, j}; }
                }
                for (auto [i, j] : {nmin, nmax})
                    pts.emplace_back(d.position(i, j).x(), d.position(i, j).y(),
                                     sol.value(i, j));
            }
            double best = 0.0;
            for (size_t a = 0; a < pts.size(); ++a)
                for (size_t b = a + 1; b < pts.size(); ++b)
                    best = std::max(best, (pts[a] - pts[b]).squaredNorm());
            comp.diameter = std::sqrt(best);
            comps.push_back(std::move(comp));
        }
    return comps;
}

HeightExperiment height_experiment(const CurvatureField& field,
                                   const std::vector<double>& radii, double spacing,
                                   double saturation_tol, const GraphSolveOptions& opts) {
    HeightExperiment out;
    const auto range = positivity_range(field, 2000, Vec3::UnitX(), Vec3::UnitY());
    out.item5_holds = range.item5_holds;
    out.item5_margin = range.item5_margin;

    // Necessary flux condition on a disk of radius r: the equation pours
    // 2 H >= 2m of divergence per unit area while the boundary flux of
    // Du/W is below the perimeter, so r m > 1 rules the graph out.
    double min_upper = std::numeric_limits<double>::infinity();
    for (const Vec3& x : fibonacci_sphere(512))
        if (x.z() >= 0.0) min_upper = std::min(min_upper, field.eval(x));

    double prev = 0.0;
    bool have_prev = false;
    for (double r : radii) {
        HeightEntry entry;
        entry.domain_size = r;
        if (min_upper > 0 && r * min_upper > 1.0 + 1e-9) {
            entry.converged = false;
            entry.status = "no graph: flux obstruction (radius exceeds 1/min H)";
            out.entries.push_back(std::move(entry));
            continue;
        }
        try {
            const GridDomain dom = GridDomain::disk(Vec2(0, 0), r, spacing);
            const GraphSolution sol = solve_dirichlet(field, dom, nullptr, opts);
            entry.converged = sol.converged;
            entry.status = sol.status;
            entry.max_height = sol.max_abs_height();
        } catch (const Error& e) {
            entry.converged = false;
            entry.status = e.what();
        }
        if (entry.converged) {
            out.supremum = std::max(out.supremum, entry.max_height);
            if (have_prev) out.last_increment = entry.max_height - prev;
            prev = entry.max_height;
            have_prev = true;
        }
        out.entries.push_back(std::move(entry));
    }
    out.saturated = have_prev && std::abs(out.last_increment) < saturation_tol &&
                    out.entries.size() >= 2;
    return out;
}

CurvatureDiagnostic curvature_diagnostic(const GraphSolution& sol) {
    const DiscreteSurface surf = DiscreteSurface::from_graph(sol);
    const std::vector<double> dist = boundary_distance(surf);
    CurvatureDiagnostic out;
    out.argmax = {0, 0};
    for (int v = 0; v < surf.vertex_count(); ++v) {
        if (surf.is_boundary(v)) continue;
        const double val = std::sqrt(surf.sigma2(v)) * dist[v];
        if (val > out.value) {
            out.value = val;
            out.argmax = surf.grid_coords(v);
        }
    }
    return out;
}

} // namespace hsurf
