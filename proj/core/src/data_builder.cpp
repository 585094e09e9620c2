#include "diskflow/data_builder.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace diskflow {

namespace {

Field divergence_of(const Field& u, const GeometryCache& geo) {
    Field g = eulerian_gradient(u, geo);
    return Field::scalar(g.comp(Field::flat_index({0, 0})) + g.comp(Field::flat_index({1, 1})));
}

Field dirichlet_solve(const Field& rhs, const GeometryCache& geo, double tol,
                      double floor) {
    EllipticProblem p;
    p.bc = BoundaryCondition::Dirichlet;
    p.rhs = rhs;
    p.tolerance = tol;
    p.absolute_floor = floor;
    return solve(p, geo).q;
}

// Roundoff scale of the hierarchy: residuals below this are noise in the
// fields the caller actually works with, not unmet tolerance.
double noise_floor(double field_scale) { return 1e-13 * (1.0 + field_scale); }

} // namespace

Field incompressible_pressure(const Field& u0, const GeometryCache& geo, double tolerance) {
    u0.require(1, Frame::Eulerian, "incompressible_pressure seed");
    double div_norm = l2_norm(divergence_of(u0, geo), geo);
    if (div_norm > 1e-8)
        throw DiskflowError("seed velocity is not divergence free: ||div u0|| = " +
                            std::to_string(div_norm));
    Field F0 = assemble_F(0, u0, {}, geo);
    double scale = u0.max_abs();
    return dirichlet_solve(-1.0 * F0, geo, tolerance, noise_floor(scale * scale));
}

Field assemble_F(int k, const Field& v0, const std::vector<Field>& h_lower,
                 const GeometryCache& geo) {
    if (k < 0 || k > 3) throw RankMismatch("wave source orders 0..3 supported");
    if (int(h_lower.size()) < k)
        throw MissingDerivedField("F_" + std::to_string(k) + " needs h_0..h_" +
                                  std::to_string(k - 1));
    TimeDerivativeTables t;
    t.v.resize(k + 1);
    t.h.resize(k + 1);
    t.v[0] = v0;
    for (int j = 0; j < k; ++j) t.h[j] = h_lower[j];
    for (int j = 1; j <= k; ++j) t.v[j] = velocity_coefficient(j, t, geo);
    return wave_source(k, t, geo);
}

BuildResult build_initial_data(const Field& u0, double kappa, const EosFamily& eos,
                               const GeometryCache& geo, const BuilderOptions& opt) {
    u0.require(1, Frame::Eulerian, "build_initial_data seed");
    if (!(kappa > 0.0) && !eos.is_incompressible()) throw NonpositiveKappa("kappa must be positive");
    if (!(opt.tol > 1e-12 && opt.tol < 1e-6))
        throw ConfigError("builder tolerance outside (1e-12, 1e-6)");
    const double inv_kappa = eos.is_incompressible() ? 0.0 : 1.0 / kappa;
    const int s = opt.sobolev_order;

    BuildResult out;
    CompatibleData& data = out.data;
    IterationTrace& trace = out.trace;
    data.u0 = u0;
    data.kappa = eos.is_incompressible() ? std::numeric_limits<double>::infinity() : kappa;
    data.p0 = incompressible_pressure(u0, geo, opt.elliptic_tol);

    const int n_r = geo.n_r(), n_t = geo.n_theta();
    Field zero_scalar(0, Frame::Eulerian, n_r, n_t);

    Field v0 = u0;
    Field phi = zero_scalar;
    std::vector<Field> h(4, zero_scalar);

    double u_scale = u0.max_abs();
    double fscale = u_scale * u_scale;

    auto solve_h = [&](int k, const Field& upper_prev) {
        Field F = assemble_F(k, v0, {h.begin(), h.begin() + k}, geo);
        Field rhs = inv_kappa * upper_prev - F;
        h[k] = dirichlet_solve(rhs, geo, opt.elliptic_tol, noise_floor(fscale));
        fscale = std::max(fscale, h[k].max_abs());
    };

    auto record_norms = [&]() {
        std::array<double, 4> m;
        double star = sobolev_norm(v0, s, geo);
        for (int k = 0; k < 4; ++k) {
            m[k] = sobolev_norm(h[k], s - k, geo);
            star += m[k];
        }
        trace.m.push_back(m);
        trace.m_star.push_back(star);
        return star;
    };

    // Base iterate: the coupled terms dropped, so h_k solves the
    // incompressible-limit hierarchy directly.
    for (int k = 0; k < 4; ++k) solve_h(k, zero_scalar);
    double m0 = record_norms();
    trace.M_star.push_back(m0);

    int stall = 0;
    int slow = 0;
    bool converged = false;
    int nu = 0;
    for (nu = 1; nu <= opt.max_iterations; ++nu) {
        Field v_prev = v0;
        std::vector<Field> h_prev = h;

        if (opt.neumann_phi) {
            EllipticProblem p;
            p.bc = BoundaryCondition::Neumann;
            p.rhs = (-inv_kappa) * h_prev[1];
            p.tolerance = opt.elliptic_tol;
            p.absolute_floor = noise_floor(fscale);
            phi = solve(p, geo).q;
        } else {
            phi = dirichlet_solve((-inv_kappa) * h_prev[1], geo, opt.elliptic_tol,
                                  noise_floor(fscale));
        }
        Field gphi = eulerian_gradient(phi, geo);
        v0 = u0 + gphi;

        solve_h(0, h_prev[2]);
        solve_h(1, h_prev[3]);
        solve_h(2, zero_scalar);
        solve_h(3, zero_scalar);

        double M = sobolev_norm(v0 - v_prev, s, geo);
        for (int k = 0; k < 4; ++k) M += sobolev_norm(h[k] - h_prev[k], s - k, geo);
        record_norms();
        double M_prev = trace.M_star[nu - 1];
        trace.M_star.push_back(M);
        trace.ratios.push_back(M_prev > 0.0 ? M / M_prev : 0.0);

        if (M <= opt.tol) {
            converged = true;
            break;
        }
        // The difference norms are built from up to s spectral derivatives, so
        // they bottom out at a resolution-dependent roundoff floor well above
        // machine epsilon.  Two consecutive slow ratios once M has dropped to
        // the floor scale mean further sweeps only churn noise: accept the
        // iterate.  A stall above that scale is a genuine contraction failure.
        slow = (M >= 0.5 * M_prev) ? slow + 1 : 0;
        stall = (M >= M_prev) ? stall + 1 : 0;
        if (slow >= 2 && M <= opt.floor_accept * (1.0 + m0)) {
            data.floor_hit = true;
            converged = true;
            break;
        }
        if (stall >= 2)
            throw NoContraction("successive approximation is not contracting at kappa = " +
                                std::to_string(kappa));
    }
    if (!converged && nu > opt.max_iterations)
        throw NoConvergence("initial-data iteration", opt.max_iterations,
                            trace.M_star.back());

    data.iterations = std::min(nu, opt.max_iterations);
    data.v0 = v0;
    data.phi = phi;
    data.h = h;
    data.h.push_back(zero_scalar);
    data.h.push_back(zero_scalar);

    if (opt.require_sign) {
        double eps = boundary_sign_values(data.h[0], geo).minCoeff();
        if (eps < opt.eps_min)
            throw SignConditionViolation("built enthalpy violates the interior-pressure bound",
                                         eps);
    }
    return out;
}

EnergyReport verify_uniform_energy(const CompatibleData& data, const EosFamily& eos, int r,
                                   const GeometryCache& geo, double eps_min) {
    Field hdot;
    if (eos.is_incompressible() && data.h.size() > 1) hdot = data.h[1];
    DerivedTimeFields derived =
        derive_time_fields(data.v0, data.h[0], hdot, eos, geo, r, false);
    return energy_total(derived.tables, eos, geo, r, eps_min);
}

} // namespace diskflow
