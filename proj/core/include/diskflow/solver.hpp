#pragma once

#include <string>
#include <vector>

#include "diskflow/data_builder.hpp"

namespace diskflow {

// Trajectory state on the reference grid: particle positions, velocity and
// enthalpy in Eulerian components, and the enthalpy rate D_t h that closes
// the second-order wave formulation.
struct SimState {
    double t = 0.0;
    LagrangianMap map;
    Field v, h, hdot;
    EosFamily eos = EosFamily::incompressible();
};

SimState initial_state(const ReferenceDisk& disk, const CompatibleData& data,
                       const EosFamily& eos);

struct StepControls {
    double cfl = 0.4;             // dt = cfl * dx_min / max(sqrt(kappa), |v|)
    double dt_override = 0.0;     // fixed step instead of the CFL rule
    int projection_interval = 10; // incompressible divergence cleaning cadence
    double elliptic_tol = 1e-10;
    int sample_count = 20;
    int energy_order = 0;         // r >= 1 adds full EnergyReports per sample
    double eps_min = 1e-6;
    bool record_snapshots = true;
};

struct Sample {
    double t = 0.0;
    double E0 = 0.0;
    double continuity_residual = 0.0; // ||div v + e'(h) hdot||
    double divergence_norm = 0.0;     // ||div v|| (the incompressible monitor)
    double eps = 0.0;
    double curl_norm = 0.0;           // L2 norm of curl v
    double energy_ratio = 0.0;        // E_r*(t) / E_r*(0) when reports are on
    bool has_report = false;
    EnergyReport report;
};

struct RunResult {
    std::vector<Sample> samples;
    std::vector<SimState> snapshots;
    int steps = 0;
    double dt = 0.0;
    double min_detj = 1.0;
    bool sign_flagged = false; // initial pressure violated the sign bound
};

// Smallest node spacing of the reference grid; the CFL rule scales it by the
// acoustic speed sqrt(kappa) or the flow speed.
double min_grid_spacing(const ReferenceDisk& disk);
double cfl_step(const SimState& s, const ReferenceDisk& disk, const StepControls& c);

// One explicit Runge-Kutta step of (x, v, h, hdot); the boundary ring of h
// and hdot is pinned to zero at every stage.
SimState step_compressible(const SimState& s, const ReferenceDisk& disk, double dt,
                           const StepControls& c = {});

RunResult run_compressible(SimState s, const ReferenceDisk& disk, double T,
                           const StepControls& c = {});

// Incompressible trajectory from a divergence-free seed: pressure solved on
// the moving domain each stage, divergence projected out periodically.
RunResult run_incompressible(const Field& u0, const ReferenceDisk& disk, double T,
                             const StepControls& c = {});

SimState step_incompressible(const SimState& s, const ReferenceDisk& disk, double dt,
                             const StepControls& c = {});

struct SweepRow {
    double kappa = 0.0;
    bool ok = false;
    std::string message;
    double sup_dv = 0.0;        // sup_t ||v_kappa - u||_L2 on the reference grid
    double sup_dh = 0.0;        // sup_t ||h_kappa - p||_L2
    double sup_dmap = 0.0;      // sup_t flow-map discrepancy (diagnostic)
    double e0_drift = 0.0;      // relative conserved-energy drift
    double max_energy_ratio = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> sample_times;
};

// Builds data and runs the compressible system for each kappa, comparing the
// trajectory with the incompressible run from the same seed at shared sample
// times.
SweepResult kappa_sweep(const Field& u0, const std::vector<double>& kappas, double T, int r,
                        const ReferenceDisk& disk, const BuilderOptions& bopt = {},
                        const StepControls& c = {});

// FD-in-time residual of the curl transport identity over stored snapshots.
std::vector<double> curl_transport_residuals(const RunResult& run, const ReferenceDisk& disk);

} // namespace diskflow
