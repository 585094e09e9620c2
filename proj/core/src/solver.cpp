#include "diskflow/solver.hpp"

#include <algorithm>
#include <cmath>

namespace diskflow {

namespace {

// Stage arithmetic for the Runge-Kutta update.
struct Deriv {
    ArrayXXd x1, x2;
    Field v, h, hdot;
};

Deriv axpy(const Deriv& a, double s, const Deriv& b) {
    Deriv out = a;
    out.x1 += s * b.x1;
    out.x2 += s * b.x2;
    out.v += s * b.v;
    out.h += s * b.h;
    out.hdot += s * b.hdot;
    return out;
}

SimState apply(const SimState& s, const Deriv& d, double dt) {
    SimState out = s;
    out.t = s.t + dt;
    out.map.x1 = s.map.x1 + dt * d.x1;
    out.map.x2 = s.map.x2 + dt * d.x2;
    out.v = s.v + dt * d.v;
    out.h = s.h + dt * d.h;
    out.hdot = s.hdot + dt * d.hdot;
    out.h.comp(0).row(0).setZero();
    out.hdot.comp(0).row(0).setZero();
    return out;
}

ArrayXXd contraction_dv2(const Field& gv) {
    // (d_i v^j)(d_j v^i) with gradient slot first.
    ArrayXXd out = ArrayXXd::Zero(gv.n_r(), gv.n_theta());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out += gv.comp(Field::flat_index({i, j})) * gv.comp(Field::flat_index({j, i}));
    return out;
}

Deriv rhs_compressible(const SimState& s, const ReferenceDisk& disk) {
    GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Core);
    Deriv d;
    d.x1 = s.v.comp(0);
    d.x2 = s.v.comp(1);
    Field gh = eulerian_gradient(s.h, geo);
    d.v = -1.0 * gh;
    d.h = s.hdot;

    Field lap = laplace_beltrami(s.h, geo);
    Field gv = eulerian_gradient(s.v, geo);
    const ArrayXXd& h0 = s.h.comp(0);
    ArrayXXd eprime = h0.unaryExpr([&](double x) { return s.eos.e_deriv(1, x); });
    ArrayXXd esecond = h0.unaryExpr([&](double x) { return s.eos.e_deriv(2, x); });
    ArrayXXd num = lap.comp(0) + contraction_dv2(gv) - esecond * s.hdot.comp(0).square();
    d.hdot = Field::scalar(num / eprime);
    return d;
}

// Residuals below roundoff of the state scale are noise, not unmet tolerance.
double noise_floor(double field_scale) { return 1e-13 * (1.0 + field_scale); }

Field pressure_of(const SimState& s, const GeometryCache& geo, double tol) {
    Field F0 = assemble_F(0, s.v, {}, geo);
    EllipticProblem p;
    p.bc = BoundaryCondition::Dirichlet;
    p.rhs = -1.0 * F0;
    p.tolerance = tol;
    double vmax = s.v.max_abs();
    p.absolute_floor = noise_floor(vmax * vmax);
    return solve(p, geo).q;
}

Deriv rhs_incompressible(const SimState& s, const ReferenceDisk& disk, double tol) {
    GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Core);
    Deriv d;
    d.x1 = s.v.comp(0);
    d.x2 = s.v.comp(1);
    Field p = pressure_of(s, geo, tol);
    d.v = -1.0 * eulerian_gradient(p, geo);
    d.h = Field::zeros_like(s.h);
    d.hdot = Field::zeros_like(s.hdot);
    return d;
}

template <typename Rhs>
SimState rk4(const SimState& s, double dt, Rhs&& rhs) {
    Deriv k1 = rhs(s);
    Deriv k2 = rhs(apply(s, k1, dt / 2));
    Deriv k3 = rhs(apply(s, k2, dt / 2));
    Deriv k4 = rhs(apply(s, k3, dt));
    Deriv sum = axpy(axpy(axpy(k1, 2.0, k2), 2.0, k3), 1.0, k4);
    SimState out = apply(s, sum, dt / 6.0);
    out.t = s.t + dt;
    return out;
}

Field divergence_of(const Field& v, const GeometryCache& geo) {
    Field g = eulerian_gradient(v, geo);
    return Field::scalar(g.comp(Field::flat_index({0, 0})) + g.comp(Field::flat_index({1, 1})));
}

void project_divergence(SimState& s, const ReferenceDisk& disk, double tol) {
    GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Core);
    Field div = divergence_of(s.v, geo);
    EllipticProblem p;
    p.bc = BoundaryCondition::Dirichlet;
    p.rhs = div;
    p.tolerance = tol;
    p.absolute_floor = noise_floor(s.v.max_abs());
    Field psi = solve(p, geo).q;
    s.v -= eulerian_gradient(psi, geo);
}

Sample take_sample(const SimState& s, const ReferenceDisk& disk, const StepControls& c,
                   double e_star_0, bool incompressible, const Field& pressure) {
    GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Full);
    Sample out;
    out.t = s.t;
    const Field& h_for_sign = incompressible ? pressure : s.h;
    out.E0 = conserved_energy(s.v, h_for_sign, s.eos, geo);
    Field div = divergence_of(s.v, geo);
    out.divergence_norm = l2_norm(div, geo);
    if (incompressible) {
        out.continuity_residual = out.divergence_norm;
    } else {
        ArrayXXd eprime =
            s.h.comp(0).unaryExpr([&](double x) { return s.eos.e_deriv(1, x); });
        out.continuity_residual =
            l2_norm(Field::scalar(div.comp(0) + eprime * s.hdot.comp(0)), geo);
    }
    out.eps = boundary_sign_values(h_for_sign, geo).minCoeff();
    // Scalar vorticity d_1 v^2 - d_2 v^1.
    out.curl_norm =
        l2_norm(Field::scalar(div_curl(s.v, geo).curl.comp(Field::flat_index({0, 1}))), geo);
    if (c.energy_order >= 1) {
        Field hdot = s.hdot;
        DerivedTimeFields derived = derive_time_fields(
            s.v, h_for_sign, hdot, s.eos, geo, c.energy_order, false);
        out.report = energy_total(derived.tables, s.eos, geo, c.energy_order, c.eps_min);
        out.has_report = true;
        out.energy_ratio = e_star_0 > 0 ? out.report.E_star / e_star_0 : 0.0;
    }
    return out;
}

} // namespace

SimState initial_state(const ReferenceDisk& disk, const CompatibleData& data,
                       const EosFamily& eos) {
    SimState s;
    s.t = 0.0;
    s.map = LagrangianMap::identity(disk);
    s.v = data.v0;
    s.h = data.h.at(0);
    s.hdot = data.h.at(1);
    s.eos = eos;
    return s;
}

double min_grid_spacing(const ReferenceDisk& disk) {
    double dr = disk.r(0) - disk.r(1);
    for (int j = 1; j + 1 < disk.n_r(); ++j) dr = std::min(dr, disk.r(j) - disk.r(j + 1));
    double dtheta_arc = disk.r(disk.n_r() - 1) * 2.0 *
                        std::sin(0.5 * (disk.theta(1) - disk.theta(0)));
    return std::min(dr, dtheta_arc);
}

double cfl_step(const SimState& s, const ReferenceDisk& disk, const StepControls& c) {
    double speed = std::max(1.0, s.v.max_abs());
    if (!s.eos.is_incompressible()) speed = std::max(speed, std::sqrt(s.eos.kappa()));
    return c.cfl * min_grid_spacing(disk) / speed;
}

SimState step_compressible(const SimState& s, const ReferenceDisk& disk, double dt,
                           const StepControls& c) {
    if (s.eos.is_incompressible())
        throw DegenerateEos("compressible step needs e' > 0");
    double limit = cfl_step(s, disk, c);
    if (c.dt_override == 0.0 && dt > limit * (1.0 + 1e-12))
        throw CflViolation("dt " + std::to_string(dt) + " exceeds the acoustic limit " +
                           std::to_string(limit));
    return rk4(s, dt, [&](const SimState& y) { return rhs_compressible(y, disk); });
}

SimState step_incompressible(const SimState& s, const ReferenceDisk& disk, double dt,
                             const StepControls& c) {
    return rk4(s, dt,
               [&](const SimState& y) { return rhs_incompressible(y, disk, c.elliptic_tol); });
}

RunResult run_compressible(SimState s, const ReferenceDisk& disk, double T,
                           const StepControls& c) {
    RunResult out;
    double dt_max = c.dt_override > 0.0 ? c.dt_override : cfl_step(s, disk, c);
    int n_samples = std::max(1, c.sample_count);
    int per = std::max(1, int(std::ceil(T / (dt_max * n_samples))));
    int n_steps = per * n_samples;
    double dt = T / n_steps;
    out.dt = dt;

    double e_star_0 = 0.0;
    if (c.energy_order >= 1) {
        GeometryCache geo0 = build_geometry(disk, s.map, GeometryLevel::Full);
        DerivedTimeFields derived =
            derive_time_fields(s.v, s.h, s.hdot, s.eos, geo0, c.energy_order, false);
        e_star_0 =
            energy_total(derived.tables, s.eos, geo0, c.energy_order, c.eps_min).E_star;
    }
    Field no_pressure;
    out.samples.push_back(take_sample(s, disk, c, e_star_0, false, no_pressure));
    if (c.record_snapshots) out.snapshots.push_back(s);
    if (T <= 0.0) { // single sample: the t = 0 report
        out.dt = 0.0;
        return out;
    }

    for (int step = 1; step <= n_steps; ++step) {
        s = step_compressible(s, disk, dt, c);
        ++out.steps;
        if (step % per == 0) {
            s.t = dt * step; // avoid accumulated rounding in sample stamps
            out.samples.push_back(take_sample(s, disk, c, e_star_0, false, no_pressure));
            if (c.record_snapshots) out.snapshots.push_back(s);
            GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Core);
            out.min_detj = std::min(out.min_detj, geo.detj.minCoeff());
        }
    }
    return out;
}

RunResult run_incompressible(const Field& u0, const ReferenceDisk& disk, double T,
                             const StepControls& c_in) {
    StepControls c = c_in;
    c.energy_order = std::min(c.energy_order, 1);
    SimState s;
    s.t = 0.0;
    s.map = LagrangianMap::identity(disk);
    s.v = u0;
    s.h = Field(0, Frame::Eulerian, disk.n_r(), disk.n_theta());
    s.hdot = Field(0, Frame::Eulerian, disk.n_r(), disk.n_theta());
    s.eos = EosFamily::incompressible();

    RunResult out;
    {
        GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Full);
        Field p0 = pressure_of(s, geo, c.elliptic_tol);
        out.sign_flagged = boundary_sign_values(p0, geo).minCoeff() <= 0.0;
    }

    double dt_max = c.dt_override > 0.0 ? c.dt_override : cfl_step(s, disk, c);
    int n_samples = std::max(1, c.sample_count);
    int per = std::max(1, int(std::ceil(T / (dt_max * n_samples))));
    int n_steps = per * n_samples;
    double dt = T / n_steps;
    out.dt = dt;

    auto sample_now = [&](SimState& y) {
        GeometryCache geo = build_geometry(disk, y.map, GeometryLevel::Full);
        Field p = pressure_of(y, geo, c.elliptic_tol);
        y.h = p;
        if (c.energy_order >= 1) {
            Field F1 = assemble_F(1, y.v, {p}, geo);
            EllipticProblem pr;
            pr.bc = BoundaryCondition::Dirichlet;
            pr.rhs = -1.0 * F1;
            pr.tolerance = c.elliptic_tol;
            double vmax = y.v.max_abs();
            pr.absolute_floor = noise_floor(vmax * vmax * (1.0 + vmax));
            y.hdot = solve(pr, geo).q;
        }
        out.samples.push_back(take_sample(y, disk, c, 1.0, true, p));
        if (c.record_snapshots) out.snapshots.push_back(y);
    };

    sample_now(s);
    // The t = 0 energy scale for the ratio column.
    double e_star_0 = 0.0;
    if (c.energy_order >= 1 && out.samples[0].has_report) {
        e_star_0 = out.samples[0].report.E_star;
        out.samples[0].energy_ratio = 1.0;
    }
    if (T <= 0.0) { // single sample: the t = 0 report
        out.dt = 0.0;
        return out;
    }

    for (int step = 1; step <= n_steps; ++step) {
        s = step_incompressible(s, disk, dt, c);
        ++out.steps;
        if (c.projection_interval > 0 && step % c.projection_interval == 0)
            project_divergence(s, disk, c.elliptic_tol);
        if (step % per == 0) {
            s.t = dt * step;
            sample_now(s);
            if (e_star_0 > 0 && out.samples.back().has_report)
                out.samples.back().energy_ratio = out.samples.back().report.E_star / e_star_0;
            GeometryCache geo = build_geometry(disk, s.map, GeometryLevel::Core);
            out.min_detj = std::min(out.min_detj, geo.detj.minCoeff());
        }
    }
    return out;
}

SweepResult kappa_sweep(const Field& u0, const std::vector<double>& kappas, double T, int r,
                        const ReferenceDisk& disk, const BuilderOptions& bopt,
                        const StepControls& c) {
    SweepResult out;
    GeometryCache geo0 = build_geometry(disk, LagrangianMap::identity(disk), GeometryLevel::Full);

    StepControls inc = c;
    inc.energy_order = std::min(c.energy_order, 1);
    inc.record_snapshots = true; // the comparison below needs both state histories
    RunResult ref = run_incompressible(u0, disk, T, inc);
    for (const Sample& s : ref.samples) out.sample_times.push_back(s.t);

    for (double kappa : kappas) {
        SweepRow row;
        row.kappa = kappa;
        try {
            EosFamily eos = default_family(kappa);
            BuildResult built = build_initial_data(u0, kappa, eos, geo0, bopt);
            SimState s0 = initial_state(disk, built.data, eos);
            StepControls cc = c;
            cc.record_snapshots = true;
            cc.energy_order = r;
            RunResult run = run_compressible(s0, disk, T, cc);
            if (run.snapshots.size() != ref.snapshots.size())
                throw DiskflowError("sample grids of the two runs disagree");

            double e00 = run.samples.front().E0;
            for (size_t i = 0; i < run.snapshots.size(); ++i) {
                const SimState& a = run.snapshots[i];
                const SimState& b = ref.snapshots[i];
                double dv = std::sqrt(disk.integrate((a.v - b.v).norm_squared()));
                double dh = std::sqrt(disk.integrate((a.h - b.h).norm_squared()));
                ArrayXXd dmap = (a.map.x1 - b.map.x1).square() + (a.map.x2 - b.map.x2).square();
                row.sup_dv = std::max(row.sup_dv, dv);
                row.sup_dh = std::max(row.sup_dh, dh);
                row.sup_dmap = std::max(row.sup_dmap, std::sqrt(disk.integrate(dmap)));
            }
            for (const Sample& s : run.samples) {
                row.e0_drift = std::max(row.e0_drift, std::abs(s.E0 - e00) / std::abs(e00));
                row.max_energy_ratio = std::max(row.max_energy_ratio, s.energy_ratio);
            }
            row.ok = true;
        } catch (const DiskflowError& err) {
            row.ok = false;
            row.message = err.what();
        }
        out.rows.push_back(row);
    }
    return out;
}

std::vector<double> curl_transport_residuals(const RunResult& run, const ReferenceDisk& disk) {
    if (run.snapshots.size() < 3)
        throw InsufficientSnapshots("curl transport check needs at least 3 snapshots");
    std::vector<double> out;
    std::vector<Field> curls;
    std::vector<GeometryCache> geos;
    for (const SimState& s : run.snapshots) {
        geos.push_back(build_geometry(disk, s.map, GeometryLevel::Core));
        curls.push_back(div_curl(s.v, geos.back()).curl);
    }
    for (size_t i = 1; i + 1 < run.snapshots.size(); ++i) {
        double dt2 = run.snapshots[i + 1].t - run.snapshots[i - 1].t;
        ArrayXXd fd =
            (curls[i + 1].comp(Field::flat_index({0, 1})) -
             curls[i - 1].comp(Field::flat_index({0, 1}))) / dt2;
        Field gv = eulerian_gradient(run.snapshots[i].v, geos[i]);
        // -(d_i v^k) curl_kj + (d_j v^k) curl_ki at (i,j) = (0,1)
        ArrayXXd rhs = ArrayXXd::Zero(fd.rows(), fd.cols());
        for (int k = 0; k < 2; ++k) {
            rhs -= gv.comp(Field::flat_index({0, k})) * curls[i].comp(Field::flat_index({k, 1}));
            rhs += gv.comp(Field::flat_index({1, k})) * curls[i].comp(Field::flat_index({k, 0}));
        }
        out.push_back(l2_norm(Field::scalar(fd - rhs), geos[i]));
    }
    return out;
}

} // namespace diskflow
