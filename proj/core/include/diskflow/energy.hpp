#pragma once

#include <vector>

#include "diskflow/expansion.hpp"

namespace diskflow {

// D_t^k fields derived algebraically from (v, h) and the evolution equations;
// never from finite differences of stored history.
struct DerivedTimeFields {
    TimeDerivativeTables tables; // h[0..r+1], v[0..r]
    int order = 0;
    double worst_tail = 0.0; // largest spectral tail fraction among the fields
};

// Builds the tables for energy order r.  For the incompressible member the
// continuity recursion is unavailable, so hdot must carry D_t h (from the
// derived pressure problem) and r is limited to 1.
DerivedTimeFields derive_time_fields(const Field& v, const Field& h, const Field& hdot,
                                     const EosFamily& eos, const GeometryCache& geo, int r,
                                     bool enforce_resolution = true);

// Conserved physical energy: int rho (|v|^2/2 + Q(h)) dmu with Q the specific
// internal energy of the state law.
double conserved_energy(const Field& v, const Field& h, const EosFamily& eos,
                        const GeometryCache& geo);

struct EnergyReport {
    int order = 0;
    double E0 = 0.0;                 // conserved energy
    std::vector<double> E_sk;        // s + k = order, indexed by k
    double K_r = 0.0;
    double W_next = 0.0;             // W_{r+1}, unsquared
    double E_r = 0.0;
    double E_star = 0.0;             // E0 + sum over orders <= r
    std::vector<double> E_orders;    // E_{r'} for r' = 1..order
    double E_hat = 0.0;              // variant dropping k in {r-1, r}
    double W_tilde_next = 0.0;       // weak-weight top term
    double E_tilde = 0.0;            // variant adding W_tilde unsquared
    double eps = 0.0;                // Taylor sign minimum over the boundary
    double calE = 0.0;               // 1/eps
    double K_geo = 0.0;              // max |curvature| + 1/l0
    double M_linf = 0.0;             // max of the pointwise monitor quantities
};

// Assembles every energy functional at order r from ready-made tables.
// Orders >= 1 require the Taylor sign minimum to stay above eps_min, since
// the boundary weight 1/(-grad_N h) enters the surface terms.
EnergyReport energy_total(const TimeDerivativeTables& t, const EosFamily& eos,
                          const GeometryCache& geo, int r, double eps_min = 1e-6);

struct TaylorReport {
    double eps = 0.0;
    double calE = 0.0;
    bool sign_ok = false;
    double K = 0.0; // max |curvature| + 1/l0
    double M = 0.0; // max over |dv|, |dh|, |d^2 h|, |d hdot|, |hdot|, |D_t^2 h|, |rho|
};

TaylorReport taylor_and_apriori(const TimeDerivativeTables& t, const EosFamily& eos,
                                const GeometryCache& geo);

// Pointwise Taylor quantity -grad_N h over the boundary ring.
ArrayXd boundary_sign_values(const Field& h, const GeometryCache& geo);

} // namespace diskflow
