#include "diskflow/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diskflow {

namespace {

ArrayXXd pointwise(const EosFamily& eos, int k, const ArrayXXd& h) {
    return h.unaryExpr([&](double x) { return eos.e_deriv(k, x); });
}

ArrayXXd density(const EosFamily& eos, const ArrayXXd& h) {
    return h.unaryExpr([&](double x) { return eos.rho(x); });
}

double l2_weighted(const ArrayXXd& weight, const Field& f, const GeometryCache& geo) {
    return std::sqrt(geo.integrate_phys(weight * f.norm_squared()));
}

} // namespace

ArrayXd boundary_sign_values(const Field& h, const GeometryCache& geo) {
    Field grad = eulerian_gradient(h, geo);
    const int n = geo.n_theta();
    ArrayXd out(n);
    for (int i = 0; i < n; ++i)
        out[i] = -(geo.bn1[i] * grad.comp(0)(0, i) + geo.bn2[i] * grad.comp(1)(0, i));
    return out;
}

DerivedTimeFields derive_time_fields(const Field& v, const Field& h, const Field& hdot,
                                     const EosFamily& eos, const GeometryCache& geo, int r,
                                     bool enforce_resolution) {
    if (r < 0 || r > 4) throw RankMismatch("energy order supported up to 4");
    v.require(1, Frame::Eulerian, "derive_time_fields velocity");
    h.require(0, Frame::Eulerian, "derive_time_fields enthalpy");

    DerivedTimeFields out;
    out.order = r;
    TimeDerivativeTables& t = out.tables;
    t.v.resize(r + 1);
    t.h.resize(r + 2);
    t.v[0] = v;
    t.h[0] = h;
    if (hdot.n_r() > 0) t.h[1] = hdot;
    if (eos.is_incompressible()) {
        if (r > 1) throw DegenerateEos("incompressible time recursion limited to order 1");
        if (r >= 1 && !t.has_h(1))
            throw MissingDerivedField("incompressible tables need D_t h from the pressure problem");
        extend_tables(t, r, std::min(r, 1), eos, geo);
    } else {
        extend_tables(t, r, r + 1, eos, geo);
    }

    const ReferenceDisk& disk = *geo.disk;
    double scale = std::max(v.max_abs(), h.max_abs());
    // Each wave-recursion level divides by e', so roundoff in table entry k is
    // amplified by (1/e')^level.  Below that amplitude the tail statistic
    // measures noise, not resolution, and the entry is skipped.
    double amp_base =
        eos.is_incompressible() ? 1.0 : std::max(1.0, 1.0 / eos.e_deriv(1, 0.0));
    double worst = 0.0;
    auto scan = [&](const Field& f, int level) {
        if (f.n_r() == 0) return;
        double amp = std::pow(amp_base, std::max(0, level));
        if (f.max_abs() <= 1e-9 * (1.0 + scale) * amp) return;
        for (int c = 0; c < f.n_components(); ++c)
            worst = std::max(worst, disk.tail_fraction(f.comp(c)));
    };
    for (size_t k = 0; k < t.v.size(); ++k) scan(t.v[k], int(k) - 2);
    for (size_t k = 0; k < t.h.size(); ++k) scan(t.h[k], int(k) - 1);
    out.worst_tail = worst;
    if (enforce_resolution && worst > 0.10)
        throw ResolutionInsufficient("spectral tail fraction " + std::to_string(worst) +
                                     " of a derived field exceeds 10%");
    return out;
}

double conserved_energy(const Field& v, const Field& h, const EosFamily& eos,
                        const GeometryCache& geo) {
    v.require(1, Frame::Eulerian, "conserved_energy velocity");
    h.require(0, Frame::Eulerian, "conserved_energy enthalpy");
    ArrayXXd rho = density(eos, h.comp(0));
    ArrayXXd q = h.comp(0).unaryExpr([&](double x) { return eos.internal_energy(x); });
    return geo.integrate_phys(rho * (0.5 * v.norm_squared() + q));
}

EnergyReport energy_total(const TimeDerivativeTables& t, const EosFamily& eos,
                          const GeometryCache& geo, int r, double eps_min) {
    if (r < 0 || r > 4) throw RankMismatch("energy order supported up to 4");
    if (!t.has_v(0) || !t.has_h(0)) throw MissingDerivedField("base fields v, h");
    for (int k = 1; k <= r; ++k) {
        if (!t.has_v(k)) throw MissingDerivedField("velocity coefficient order " + std::to_string(k));
        if (!t.has_h(k)) throw MissingDerivedField("enthalpy coefficient order " + std::to_string(k));
    }
    bool has_top_h = t.has_h(r + 1);
    if (!eos.is_incompressible() && r >= 1 && !has_top_h)
        throw MissingDerivedField("enthalpy coefficient order " + std::to_string(r + 1));

    EnergyReport rep;
    rep.order = r;
    rep.E0 = conserved_energy(t.v[0], t.h[0], eos, geo);

    const ArrayXXd& h0 = t.h[0].comp(0);
    ArrayXXd rho = density(eos, h0);
    ArrayXXd eprime = pointwise(eos, 1, h0);

    ArrayXd sign_vals = boundary_sign_values(t.h[0], geo);
    rep.eps = sign_vals.minCoeff();
    rep.calE = rep.eps > 0 ? 1.0 / rep.eps : std::numeric_limits<double>::infinity();
    if (r >= 1 && rep.eps < eps_min)
        throw SignConditionViolation("boundary weight needs the Taylor sign bound", rep.eps);

    ArrayXd nu;
    ArrayXd rho_b(geo.n_theta());
    if (rep.eps >= eps_min) {
        nu = 1.0 / sign_vals;
        for (int i = 0; i < geo.n_theta(); ++i) rho_b[i] = eos.rho(h0(0, i));
    }

    // E_{s,k} at a given order: interior tangential velocity and enthalpy
    // pieces plus the weighted boundary piece (dropped when the boundary
    // weight is undefined, which can only happen at order zero).
    auto E_sk = [&](int s, int k) {
        Field dv = grad_pow(t.v[k], s, geo);
        Field dh = grad_pow(t.h[k], s, geo);
        ArrayXXd qv = q_inner(dv, dv, geo, s);
        ArrayXXd qh = q_inner(dh, dh, geo, s);
        double interior_v = 0.5 * geo.integrate_phys(rho * qv);
        double interior_h = 0.5 * geo.integrate_phys(rho * eprime * qh);
        double boundary =
            nu.size() > 0
                ? 0.5 * geo.boundary_integrate_phys(rho_b * qh.row(0).transpose() * nu)
                : 0.0;
        return interior_v + interior_h + boundary;
    };

    DivCurl dc = div_curl(t.v[0], geo);

    double sum_lower = 0.0;
    for (int rp = 1; rp <= r; ++rp) {
        double interior = 0.0, hat_interior = 0.0;
        std::vector<double> parts(rp + 1, 0.0);
        for (int k = 0; k <= rp; ++k) {
            parts[k] = E_sk(rp - k, k);
            interior += parts[k];
            if (k <= rp - 2) hat_interior += parts[k];
        }
        Field curl_d = grad_pow(dc.curl, rp - 1, geo);
        double K = geo.integrate_phys(rho * curl_d.norm_squared());

        double W = 0.5 * l2_weighted(ArrayXXd::Ones(geo.n_r(), geo.n_theta()),
                                     eulerian_gradient(t.h[rp], geo), geo);
        if (!eos.is_incompressible() && t.has_h(rp + 1))
            W += 0.5 * l2_weighted(eprime, t.h[rp + 1], geo);

        double E = interior + K + W * W;
        rep.E_orders.push_back(E);
        if (rp < r) sum_lower += E;
        if (rp == r) {
            rep.E_sk = parts;
            rep.K_r = K;
            rep.W_next = W;
            rep.E_r = E;
            rep.E_hat = hat_interior + K + W * W;

            double Wt = 0.0;
            if (!eos.is_incompressible() && t.has_h(rp + 1))
                Wt += 0.5 * l2_weighted(eprime * eprime, t.h[rp + 1], geo);
            Wt += 0.5 * l2_weighted(eprime, eulerian_gradient(t.h[rp], geo), geo);
            rep.W_tilde_next = Wt;
            rep.E_tilde = interior + K + Wt;
        }
    }
    rep.E_star = rep.E0 + sum_lower + (r >= 1 ? rep.E_r : 0.0);
    if (r == 0) {
        // The order-zero report carries the conserved energy as E_r and the
        // plain (s,k) = (0,0) functional plus W_1 for reference.
        rep.E_r = rep.E0;
        rep.E_sk = {E_sk(0, 0)};
        double W = 0.5 * l2_norm(eulerian_gradient(t.h[0], geo), geo);
        if (!eos.is_incompressible() && t.has_h(1))
            W += 0.5 * l2_weighted(eprime, t.h[1], geo);
        rep.W_next = W;
    }

    TaylorReport tr = taylor_and_apriori(t, eos, geo);
    rep.K_geo = tr.K;
    rep.M_linf = tr.M;
    return rep;
}

TaylorReport taylor_and_apriori(const TimeDerivativeTables& t, const EosFamily& eos,
                                const GeometryCache& geo) {
    if (!t.has_v(0) || !t.has_h(0)) throw MissingDerivedField("base fields v, h");
    TaylorReport rep;
    ArrayXd sign_vals = boundary_sign_values(t.h[0], geo);
    rep.eps = sign_vals.minCoeff();
    rep.sign_ok = rep.eps > 0;
    rep.calE = rep.sign_ok ? 1.0 / rep.eps : std::numeric_limits<double>::infinity();
    rep.K = geo.max_curvature + (geo.l0 > 0 ? 1.0 / geo.l0 : 0.0);

    double m = eulerian_gradient(t.v[0], geo).max_abs();
    Field gh = eulerian_gradient(t.h[0], geo);
    m = std::max(m, gh.max_abs());
    m = std::max(m, eulerian_gradient(gh, geo).max_abs());
    if (t.has_h(1)) {
        m = std::max(m, t.h[1].max_abs());
        m = std::max(m, eulerian_gradient(t.h[1], geo).max_abs());
    }
    if (t.has_h(2)) m = std::max(m, t.h[2].max_abs());
    m = std::max(m, density(eos, t.h[0].comp(0)).abs().maxCoeff());
    rep.M = m;
    return rep;
}

} // namespace diskflow
