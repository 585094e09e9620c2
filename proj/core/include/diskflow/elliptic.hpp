#pragma once

#include <memory>

#include "diskflow/calculus.hpp"

namespace diskflow {

enum class BoundaryCondition { Dirichlet, Neumann };

// Laplacian solve on the unit disk, one angular mode at a time.  Each mode
// carries definite radial parity on the doubled Chebyshev grid, so the fold
// onto stored rings is exact and the radial systems are small dense solves.
// Also serves as the preconditioner for solves in a moving metric.
class FlatDiskSolver {
  public:
    FlatDiskSolver(const ReferenceDisk& disk, BoundaryCondition bc);
    ~FlatDiskSolver();
    FlatDiskSolver(FlatDiskSolver&&) noexcept;

    // rhs on the full grid, boundary values (Dirichlet) or outward fluxes
    // (Neumann) per boundary node.  The Neumann mean mode is pinned to zero
    // disk average through a bordered system.
    ArrayXXd solve(const ArrayXXd& rhs, const ArrayXd& bdata) const;

    BoundaryCondition bc() const { return bc_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    BoundaryCondition bc_;
};

struct EllipticProblem {
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    Field rhs;            // scalar source
    ArrayXd boundary_data; // values or fluxes per boundary node
    double tolerance = 1e-10;
    int max_iterations = 300;
    // Residual floor in solution units.  Preconditioned residuals below this
    // count as converged even when the rhs itself is roundoff noise, so the
    // relative target can never be met.  Zero keeps the purely relative test.
    double absolute_floor = 0.0;
};

struct EllipticSolution {
    Field q;
    int iterations = 0;
    double residual = 0.0;       // relative residual of the returned solution
    double neumann_defect = 0.0; // compatibility defect absorbed before solving
};

// Solve div-form Laplace(q) = rhs in the metric carried by geo, flat per-mode
// solves preconditioning a GMRES iteration on the full operator.
EllipticSolution solve(const EllipticProblem& problem, const GeometryCache& geo);

// ||q|| / ||grad q|| and ||grad q|| / ||Lap q|| against the round-domain
// reference bound sqrt(vol/pi)/j01 for functions vanishing on the boundary.
struct PoincareReport {
    double ratio_q_grad = 0.0;
    double ratio_grad_lap = 0.0;
    double reference_bound = 0.0;
    bool within_reference = false;
};
PoincareReport poincare_check(const Field& q, const GeometryCache& geo);

// L2 boundary residual of the projected-Hessian identity
// Pi(d^2 q) = theta * grad_N q for q vanishing on the boundary.
double projection_formula_residual(const Field& q, const GeometryCache& geo);

// Gradient-control functional: smallest C with
// int |d beta|^2 <= C int (normal-tangential term + |div|^2 + |curl|^2 + K^2 |beta|^2)
// for beta = d^r u.
struct HodgeReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    double K = 0.0;
};
HodgeReport hodge_check(const Field& u, int r, const GeometryCache& geo);

struct TraceReport {
    double boundary_norm = 0.0;
    double interior_norms = 0.0; // ||a|| + ||grad a||
    double ratio = 0.0;
};
TraceReport trace_check(const Field& alpha, const GeometryCache& geo);

} // namespace diskflow
