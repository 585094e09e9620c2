#pragma once

#include <vector>

#include "diskflow/calculus.hpp"
#include "diskflow/eos.hpp"

namespace diskflow {

// Material-derivative coefficients of the flow at one instant: v[b] holds
// D_t^b v (rank 1, Eulerian components), h[b] holds D_t^b h (rank 0).  An
// entry with no grid attached counts as absent.
struct TimeDerivativeTables {
    std::vector<Field> v;
    std::vector<Field> h;

    bool has_v(int b) const { return b >= 0 && b < int(v.size()) && v[b].n_r() > 0; }
    bool has_h(int b) const { return b >= 0 && b < int(h.size()) && h[b].n_r() > 0; }
};

// v_k = D_t^k v, expanded from D_t v = -grad h with every gradient commuted
// through the material derivative mechanically.  Needs h[0..k-1], v[0..k-2].
Field velocity_coefficient(int k, const TimeDerivativeTables& t, const GeometryCache& geo);

// h_k = D_t^k h from the wave hierarchy D_t^k e(h) = D_t^{k-2}(Lap h + (dv)^2)
// solved for the top time derivative; k = 1 comes from the continuity
// equation div v = -e'(h) D_t h.  Needs h[0..k-1] and v[0..k-2].
Field enthalpy_coefficient(int k, const TimeDerivativeTables& t, const EosFamily& eos,
                           const GeometryCache& geo);

// F_k: the value of D_t^k(Lap h + (dv)^2) with the leading Lap h_k term
// removed, so that D_t^{k+2} e(h) = Lap h_k + F_k at the evaluation instant.
// Needs v[0..k] and h[0..k-1]; F_0 = (d_i v^j)(d_j v^i).
Field wave_source(int k, const TimeDerivativeTables& t, const GeometryCache& geo);

// Fills v[1..k_v] and h[1..k_h] from v[0], h[0] (and h[1] when the state law
// is incompressible, where the continuity recursion is unavailable),
// alternating the two recursions in dependency order.  Existing entries are
// kept untouched.
void extend_tables(TimeDerivativeTables& t, int k_v, int k_h, const EosFamily& eos,
                   const GeometryCache& geo);

} // namespace diskflow
