#pragma once

#include <array>
#include <utility>
#include <vector>

#include "diskflow/elliptic.hpp"
#include "diskflow/energy.hpp"

namespace diskflow {

// Initial data for the compressible system built so that D_t^k h vanishes on
// the boundary at t = 0 for k <= 5 (h4 = h5 = 0 close the hierarchy).
struct CompatibleData {
    Field u0;  // divergence-free seed
    Field p0;  // pressure of the incompressible flow with the same seed
    Field v0;  // compressible initial velocity = u0 + grad phi
    Field phi;
    std::vector<Field> h; // h[0..5]
    double kappa = 0.0;
    int iterations = 0;
    bool floor_hit = false; // iteration stalled at the numerical noise floor
};

// Norm history of the successive approximation: m_k are iterate norms in
// H^{s-k}, M_* sums the successive-difference norms (M_*^0 equals m_*^0).
struct IterationTrace {
    std::vector<std::array<double, 4>> m; // per iteration, k = 0..3
    std::vector<double> m_star;
    std::vector<double> M_star;
    std::vector<double> ratios; // M_*^nu / M_*^{nu-1}, nu >= 1
};

struct BuilderOptions {
    double tol = 1e-9;        // stop once M_* <= tol
    int max_iterations = 40;
    double elliptic_tol = 1e-11;
    int sobolev_order = 5;    // s in the H^{s-k} difference norms
    bool neumann_phi = false; // zero-flux potential instead of zero-value
    double eps_min = 1e-6;
    bool require_sign = true; // reject data whose h0 violates the sign bound
    // Stagnating M_* below floor_accept * (1 + m_*^0) counts as converged;
    // above it, stagnation means the coupling is too strong (kappa too small).
    double floor_accept = 1e-6;
};

struct BuildResult {
    CompatibleData data;
    IterationTrace trace;
};

// Pressure of the incompressible flow: Lap p = -(d_i u^j)(d_j u^i), p = 0 on
// the boundary.
Field incompressible_pressure(const Field& u0, const GeometryCache& geo,
                              double tolerance = 1e-11);

// F_k of the wave hierarchy at t = 0, evaluated mechanically from the
// expansion engine; h_lower supplies h_0..h_{k-1}.
Field assemble_F(int k, const Field& v0, const std::vector<Field>& h_lower,
                 const GeometryCache& geo);

BuildResult build_initial_data(const Field& u0, double kappa, const EosFamily& eos,
                               const GeometryCache& geo, const BuilderOptions& opt = {});

// Re-derives the time-derivative tables from the built (v0, h0) and assembles
// the order-r energy report at t = 0.
EnergyReport verify_uniform_energy(const CompatibleData& data, const EosFamily& eos, int r,
                                   const GeometryCache& geo, double eps_min = 1e-6);

} // namespace diskflow
