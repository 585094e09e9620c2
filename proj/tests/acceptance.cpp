// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned here on purpose; loosening them is a
// regression, not a fix.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "diskflow/solver.hpp"

using namespace diskflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field scalar_of(const ReferenceDisk& disk, const std::function<double(double, double)>& f) {
    Field out(0, Frame::Eulerian, disk.n_r(), disk.n_theta());
    for (int j = 0; j < disk.n_r(); ++j)
        for (int i = 0; i < disk.n_theta(); ++i)
            out.comp(0)(j, i) = f(disk.y1(j, i), disk.y2(j, i));
    return out;
}

Field vector_of(const ReferenceDisk& disk, const std::function<double(double, double)>& f1,
                const std::function<double(double, double)>& f2) {
    Field out(1, Frame::Eulerian, disk.n_r(), disk.n_theta());
    for (int j = 0; j < disk.n_r(); ++j)
        for (int i = 0; i < disk.n_theta(); ++i) {
            out.comp(0)(j, i) = f1(disk.y1(j, i), disk.y2(j, i));
            out.comp(1)(j, i) = f2(disk.y1(j, i), disk.y2(j, i));
        }
    return out;
}

Field quadrupole(const ReferenceDisk& disk, double a) {
    return vector_of(disk, [a](double x, double) { return a * x; },
                     [a](double, double y) { return -a * y; });
}

Field rotation(const ReferenceDisk& disk, double w) {
    return vector_of(disk, [w](double, double y) { return -w * y; },
                     [w](double x, double) { return w * x; });
}

double rel_drift(const RunResult& run) {
    double e0 = run.samples.front().E0;
    double worst = 0.0;
    for (const Sample& s : run.samples) worst = std::max(worst, std::abs(s.E0 - e0));
    return worst / std::abs(e0);
}

// Shared state across criteria so expensive runs happen once.
struct Workspace {
    ReferenceDisk disk{33, 64};
    RunResult crit1_run;      // criterion 1 default-step run, reused by 7 and 8
    bool crit1_ready = false;
};

bool criterion1(Workspace& ws) {
    double kappa = 100.0;
    GeometryCache geo = build_geometry(ws.disk, LagrangianMap::identity(ws.disk));
    BuildResult built =
        build_initial_data(quadrupole(ws.disk, 2.0), kappa, EosFamily::linear(kappa), geo);
    EosFamily eos = EosFamily::linear(kappa);

    StepControls c;
    c.energy_order = 2;
    SimState s0 = initial_state(ws.disk, built.data, eos);
    ws.crit1_run = run_compressible(s0, ws.disk, 0.2, c);
    ws.crit1_ready = true;
    double d1 = rel_drift(ws.crit1_run);

    StepControls ch;
    ch.dt_override = ws.crit1_run.dt / 2;
    RunResult half = run_compressible(s0, ws.disk, 0.2, ch);
    double d2 = rel_drift(half);

    bool ok = d1 <= 1e-4 && d2 <= d1 / 8.0;
    std::printf("criterion 1: %s (drift %.3e at dt=%.3e, %.3e at dt/2, ratio %.2f)\n",
                ok ? "PASS" : "FAIL", d1, ws.crit1_run.dt, d2, d2 > 0 ? d1 / d2 : 1e300);
    return ok;
}

bool criterion2(const Workspace& ws) {
    SweepResult sweep = kappa_sweep(quadrupole(ws.disk, 2.0), {1e2, 1e3, 1e4}, 0.2, 1, ws.disk);
    bool ok = sweep.rows.size() == 3;
    for (const SweepRow& row : sweep.rows)
        if (!row.ok) {
            std::printf("criterion 2: FAIL (kappa %.0e: %s)\n", row.kappa, row.message.c_str());
            return false;
        }
    for (size_t i = 1; i < sweep.rows.size(); ++i) {
        const SweepRow& a = sweep.rows[i - 1];
        const SweepRow& b = sweep.rows[i];
        ok = ok && b.sup_dv < a.sup_dv && b.sup_dh < a.sup_dh;
        ok = ok && b.sup_dv <= 0.5 * a.sup_dv && b.sup_dh <= 0.5 * a.sup_dh;
    }
    std::printf("criterion 2: %s (sup|dv| = %.3e %.3e %.3e, sup|dh| = %.3e %.3e %.3e)\n",
                ok ? "PASS" : "FAIL", sweep.rows[0].sup_dv, sweep.rows[1].sup_dv,
                sweep.rows[2].sup_dv, sweep.rows[0].sup_dh, sweep.rows[1].sup_dh,
                sweep.rows[2].sup_dh);
    return ok;
}

bool criterion3(const Workspace& ws) {
    GeometryCache geo = build_geometry(ws.disk, LagrangianMap::identity(ws.disk));
    Field u0 = quadrupole(ws.disk, 2.0);

    // Tight tolerances so the contraction is observable down to the floor.
    BuilderOptions tight;
    tight.tol = 2e-12;
    tight.elliptic_tol = 1e-13;
    BuildResult hard = build_initial_data(u0, 1e4, EosFamily::linear(1e4), geo, tight);

    // Count leading contraction ratios < 0.1.  At kappa = 1e4 each step
    // contracts by ~1e-3, so the differences reach the elliptic solve floor
    // after a few steps; the geometric claim is certified either by five
    // observed ratios or by the same total decay (1e-5) in fewer steps.
    const std::vector<double>& M = hard.trace.M_star;
    std::string seq;
    char buf[32];
    size_t clean = 0;
    for (size_t i = 2; i < M.size(); ++i) {
        double ratio = M[i] / M[i - 1];
        std::snprintf(buf, sizeof buf, " %.2e", ratio);
        seq += buf;
        if (!(ratio < 0.1)) break;
        ++clean;
    }
    double decay_at_break = M.size() > 1 + clean ? M[1 + clean] / M[1] : 1.0;
    bool contraction_ok = clean >= 5 || (clean >= 2 && decay_at_break <= 1e-5);

    double bmax = 0.0;
    for (const Field& hk : hard.data.h)
        bmax = std::max(bmax, hk.comp(0).row(0).abs().maxCoeff());
    bool boundary_ok = bmax <= 1e-10;

    double lo = 1e300, hi = 0.0;
    for (double kappa : {1e2, 1e3, 1e4}) {
        BuildResult b = build_initial_data(u0, kappa, EosFamily::linear(kappa), geo);
        double e = verify_uniform_energy(b.data, EosFamily::linear(kappa), 2, geo).E_star;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    bool uniform_ok = (hi - lo) / hi < 0.2;

    bool ok = contraction_ok && boundary_ok && uniform_ok;
    std::printf("criterion 3: %s (ratios%s; %zu clean, decay %.1e; boundary %.2e; "
                "E2* spread %.1f%%)\n",
                ok ? "PASS" : "FAIL", seq.c_str(), clean, decay_at_break, bmax,
                100.0 * (hi - lo) / hi);
    return ok;
}

bool criterion4(const Workspace& ws) {
    GeometryCache geo = build_geometry(ws.disk, LagrangianMap::identity(ws.disk));
    BuildResult built =
        build_initial_data(quadrupole(ws.disk, 2.0), 1e4, EosFamily::linear(1e4), geo);
    double eps = boundary_sign_values(built.data.h[0], geo).minCoeff();
    bool eps_ok = std::abs(eps - 4.0) / 4.0 <= 0.02;

    bool rejected = false;
    try {
        build_initial_data(rotation(ws.disk, 1.0), 1e4, EosFamily::linear(1e4), geo);
    } catch (const SignConditionViolation&) {
        rejected = true;
    }
    bool ok = eps_ok && rejected;
    std::printf("criterion 4: %s (eps = %.6f, rotation seed %s)\n", ok ? "PASS" : "FAIL", eps,
                rejected ? "rejected" : "NOT rejected");
    return ok;
}

// Largest relative mismatch between analytic material rates of the metric
// data and a centered difference of two rebuilt geometries.
double rate_fd_error(const ReferenceDisk& disk, double delta) {
    double w = 0.8, a = 0.5, t0 = 0.3;
    auto map_at = [&](double t) {
        LagrangianMap m = LagrangianMap::identity(disk);
        double c = std::cos(w * t), s = std::sin(w * t), g = 1 + a * t;
        ArrayXXd x1 = m.x1, x2 = m.x2;
        m.x1 = g * (c * x1 - s * x2);
        m.x2 = g * (s * x1 + c * x2);
        return m;
    };
    auto velocity_at = [&](double t, const GeometryCache& geo) {
        double g = 1 + a * t;
        Field v(1, Frame::Eulerian, disk.n_r(), disk.n_theta());
        v.comp(0) = (a / g) * geo.x1 - w * geo.x2;
        v.comp(1) = (a / g) * geo.x2 + w * geo.x1;
        return v;
    };
    GeometryCache g0 = build_geometry(disk, map_at(t0));
    GeometryCache gm = build_geometry(disk, map_at(t0 - delta));
    GeometryCache gp = build_geometry(disk, map_at(t0 + delta));
    GeometryRates rates = geometry_material_derivatives(g0, velocity_at(t0, g0));

    double err = 0.0;
    auto rel = [&](double fd, double an, double scale) {
        err = std::max(err, std::abs(fd - an) / scale);
    };
    double gs = g0.g11.abs().maxCoeff();
    for (int j = 0; j < disk.n_r(); ++j)
        for (int i = 0; i < disk.n_theta(); ++i) {
            rel((gp.g11(j, i) - gm.g11(j, i)) / (2 * delta),
                rates.dt_g.comp(Field::flat_index({0, 0}))(j, i), gs);
            rel((gp.detj(j, i) - gm.detj(j, i)) / (2 * delta),
                g0.detj(j, i) * rates.volume_rate(j, i), 1.0);
        }
    auto gamma_density = [](const GeometryCache& g, int i) {
        return g.detj(0, i) / std::sqrt(g.Nlow1(i) * g.Nlow1(i) + g.Nlow2(i) * g.Nlow2(i));
    };
    for (int i = 0; i < disk.n_theta(); ++i) {
        rel((gamma_density(gp, i) - gamma_density(gm, i)) / (2 * delta),
            rates.surface_rate(i) * gamma_density(g0, i), 1.0);
        rel((gp.Nlow1(i) - gm.Nlow1(i)) / (2 * delta), rates.dt_conormal.comp(0)(i), 1.0);
    }
    return err;
}

bool criterion5(const Workspace& ws) {
    const ReferenceDisk& disk = ws.disk;
    // Commutators on polynomial data: a small grid keeps the data exact while
    // the roundoff floor of the repeated spectral derivatives (which grows
    // like N^4 at third order) stays well below the tolerance.
    ReferenceDisk small(9, 16);
    GeometryCache curved = build_geometry(small, LagrangianMap::dilation(small, 1.3));

    Field v = quadrupole(small, 2.0);
    Field f = scalar_of(small, [](double x, double y) { return x * x * y + y * y; });
    Field vp = scalar_of(small, [](double x, double y) { return x * x - y * y; });
    double worst_comm = 0.0;
    worst_comm = std::max(worst_comm, commutator_residual(CommutatorKind::DtGrad, 1, v, f, curved));
    worst_comm = std::max(worst_comm, commutator_residual(CommutatorKind::LaplaceDt, 1, v, vp, curved));
    for (int r = 2; r <= 3; ++r)
        worst_comm =
            std::max(worst_comm, commutator_residual(CommutatorKind::DtGradR, r, v, f, curved));
    bool comm_ok = worst_comm <= 1e-9;

    ReferenceDisk coarse(17, 32);
    double e1 = rate_fd_error(coarse, 2e-3);
    double e2 = rate_fd_error(coarse, 1e-3);
    double order = std::log2(e1 / e2);
    bool rates_ok = order > 1.7 && order < 2.6 && e2 < 1e-4;

    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    Field q1 = scalar_of(disk, [](double x, double y) { return 1 - x * x - y * y; });
    Field q2 = scalar_of(disk, [](double x, double y) { return (1 - x * x - y * y) * x; });
    double p1 = projection_formula_residual(q1, geo);
    double p2 = projection_formula_residual(q2, geo);
    bool proj_ok = p1 <= 1e-8 && p2 <= 1e-8;

    bool ok = comm_ok && rates_ok && proj_ok;
    std::printf(
        "criterion 5: %s (commutators %.2e; rate FD order %.2f; projection %.2e %.2e)\n",
        ok ? "PASS" : "FAIL", worst_comm, order, p1, p2);
    return ok;
}

bool criterion6(const Workspace& ws) {
    GeometryCache geo = build_geometry(ws.disk, LagrangianMap::identity(ws.disk));
    double j01 = 2.404825557695773;
    Field bessel = scalar_of(ws.disk, [&](double x, double y) {
        return std::cyl_bessel_j(0, j01 * std::sqrt(x * x + y * y));
    });
    PoincareReport rep = poincare_check(bessel, geo);
    bool poincare_ok = std::abs(rep.ratio_q_grad - 1.0 / j01) <= 1e-6 && rep.within_reference;

    auto rich = [](const ReferenceDisk& d) {
        Field u(1, Frame::Eulerian, d.n_r(), d.n_theta());
        for (int j = 0; j < d.n_r(); ++j)
            for (int i = 0; i < d.n_theta(); ++i) {
                double x = d.y1(j, i), y = d.y2(j, i);
                u.comp(0)(j, i) = x * x * y + 0.5 * x;
                u.comp(1)(j, i) = x * y * y - 0.5 * y;
            }
        return u;
    };
    auto scalar_rich = [](const ReferenceDisk& d) {
        Field q(0, Frame::Eulerian, d.n_r(), d.n_theta());
        for (int j = 0; j < d.n_r(); ++j)
            for (int i = 0; i < d.n_theta(); ++i) {
                double x = d.y1(j, i), y = d.y2(j, i);
                q.comp(0)(j, i) = x * x * (x * x + y * y);
            }
        return q;
    };
    ReferenceDisk coarse(17, 32);
    GeometryCache geo_c = build_geometry(coarse, LagrangianMap::identity(coarse));
    HodgeReport h1 = hodge_check(rich(coarse), 1, geo_c);
    HodgeReport h2 = hodge_check(rich(ws.disk), 1, geo);
    TraceReport t1 = trace_check(scalar_rich(coarse), geo_c);
    TraceReport t2 = trace_check(scalar_rich(ws.disk), geo);
    bool hodge_ok = std::isfinite(h1.constant) && std::isfinite(h2.constant) &&
                    std::abs(h1.constant - h2.constant) / h2.constant <= 0.05;
    bool trace_ok = std::isfinite(t1.ratio) && std::isfinite(t2.ratio) &&
                    std::abs(t1.ratio - t2.ratio) / t2.ratio <= 0.05;

    bool ok = poincare_ok && hodge_ok && trace_ok;
    std::printf("criterion 6: %s (ratio %.9f vs %.9f; Hodge %.4f -> %.4f; trace %.4f -> %.4f)\n",
                ok ? "PASS" : "FAIL", rep.ratio_q_grad, 1.0 / j01, h1.constant, h2.constant,
                t1.ratio, t2.ratio);
    return ok;
}

bool criterion7(const Workspace& ws) {
    if (!ws.crit1_ready) {
        std::printf("criterion 7: FAIL (criterion 1 run unavailable)\n");
        return false;
    }
    double worst = 0.0;
    bool have = false;
    for (const Sample& s : ws.crit1_run.samples)
        if (s.has_report) {
            worst = std::max(worst, s.energy_ratio);
            have = true;
        }
    bool ok = have && worst <= 2.0;
    std::printf("criterion 7: %s (max E2*(t)/E2*(0) = %.4f)\n", ok ? "PASS" : "FAIL", worst);
    return ok;
}

bool criterion8(const Workspace& ws) {
    bool irrot_ok = ws.crit1_ready;
    double worst_curl = 0.0;
    if (ws.crit1_ready) {
        for (const Sample& s : ws.crit1_run.samples) worst_curl = std::max(worst_curl, s.curl_norm);
        irrot_ok = worst_curl <= 1e-8;
    }

    double omega = 1.0;
    StepControls c;
    c.sample_count = 10;
    RunResult run = run_incompressible(rotation(ws.disk, omega), ws.disk, 0.5, c);
    bool flagged = run.sign_flagged;
    double curl_dev = 0.0, rim_dev = 0.0;
    for (const SimState& s : run.snapshots) {
        GeometryCache g = build_geometry(ws.disk, s.map, GeometryLevel::Core);
        Field curl = div_curl(s.v, g).curl;
        curl_dev = std::max(
            curl_dev, (curl.comp(Field::flat_index({0, 1})) - 2 * omega).abs().maxCoeff());
        ArrayXXd r2 = s.map.x1.row(0).square() + s.map.x2.row(0).square();
        rim_dev = std::max(rim_dev, (r2.sqrt() - 1.0).abs().maxCoeff());
    }
    bool rot_ok = flagged && curl_dev <= 1e-6 && rim_dev <= 1e-6;

    bool ok = irrot_ok && rot_ok;
    std::printf(
        "criterion 8: %s (max ||curl|| %.2e irrotational; rotation curl dev %.2e, rim drift "
        "%.2e, sign %s)\n",
        ok ? "PASS" : "FAIL", worst_curl, curl_dev, rim_dev, flagged ? "flagged" : "missed");
    return ok;
}

} // namespace

int main() {
    Workspace ws;
    using Clock = std::chrono::steady_clock;
    std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
        {"1", [&] { return criterion1(ws); }}, {"2", [&] { return criterion2(ws); }},
        {"3", [&] { return criterion3(ws); }}, {"4", [&] { return criterion4(ws); }},
        {"5", [&] { return criterion5(ws); }}, {"6", [&] { return criterion6(ws); }},
        {"7", [&] { return criterion7(ws); }}, {"8", [&] { return criterion8(ws); }},
    };
    int failures = 0;
    for (auto& [name, fn] : criteria) {
        auto start = Clock::now();
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& err) {
            std::printf("criterion %s: FAIL (unexpected error: %s)\n", name, err.what());
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("  [%s took %.1f s]\n", name, secs);
        if (!ok) ++failures;
    }
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
