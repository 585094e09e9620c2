#pragma once

#include "diskflow/geometry.hpp"

namespace diskflow {

// Eulerian derivative of each component; the new index comes first, so
// out(i, J) = d_i f_J.  Input must be Eulerian-frame (or scalar).
Field eulerian_gradient(const Field& f, const GeometryCache& geo);

// s-fold Eulerian gradient.
Field grad_pow(const Field& f, int s, const GeometryCache& geo);

// Laplace-Beltrami of a scalar in divergence form,
// (1/sqrtg) d_a (sqrt g g^ab d_b h), applied spectrally.  Agrees with the
// trace of the Eulerian Hessian to spectral accuracy.
Field laplace_beltrami(const Field& h, const GeometryCache& geo);

struct DivCurl {
    ArrayXXd divergence;
    Field curl; // rank 2, antisymmetric: curl(i,j) = d_i v_j - d_j v_i
};
DivCurl div_curl(const Field& v, const GeometryCache& geo);

// Symmetrized contraction: glue A's last slot to B's first, then average over
// all permutations of the remaining slots.  For A = dv, B = df this is
// (dv .~ df)_i = d_i v^k d_k f.
Field symmetric_dot(const Field& A, const Field& B);

// Contract every slot with the tangential projection delta - n n at the
// boundary.
BoundaryField boundary_project(const BoundaryField& S, const GeometryCache& geo);

// Pointwise inner product with the collar-weighted contraction q^ij on the
// first n_q_slots index pairs and plain delta on the rest.  n_q_slots = -1
// means all slots.
ArrayXXd q_inner(const Field& a, const Field& b, const GeometryCache& geo, int n_q_slots = -1);

double l2_norm(const Field& f, const GeometryCache& geo);
double l2_norm_boundary(const BoundaryField& f, const GeometryCache& geo);

// Discrete H^l norm: sqrt of the sum of squared L2 norms of Eulerian
// derivatives up to order l, all components included.
double sobolev_norm(const Field& u, int order, const GeometryCache& geo);

enum class CommutatorKind {
    DtGrad,    // [D_t, d_i] f = -(d_i v^k) d_k f
    DtGradR,   // [D_t, d^r] f expanded through symmetric dots
    LaplaceDt, // [Lap, D_t] f = (Lap v^j) d_j f + 2 d^i v^j d_i d_j f
};

// L2 size of the identity residual for a time-independent Eulerian test
// function f advected by v; D_t f = v . df is exact, so the residual isolates
// spatial discretization error.
double commutator_residual(CommutatorKind kind, int order, const Field& v, const Field& f,
                           const GeometryCache& geo);

} // namespace diskflow
