// Command-line front end: configure experiments, build initial data, run
// trajectories and stiffness sweeps, evaluate grid monitors, and emit plot
// scripts for the resulting tables.  Exit codes: 1 configuration, 2 numerical
// failure, 3 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diskflow/calculus.hpp"
#include "diskflow/config.hpp"
#include "diskflow/data_builder.hpp"
#include "diskflow/io.hpp"
#include "diskflow/solver.hpp"

namespace fs = std::filesystem;
using namespace diskflow;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

EosFamily family_of(const ExperimentConfig& cfg) {
    if (cfg.eos_family == "incompressible") return EosFamily::incompressible();
    return EosFamily::linear(cfg.kappa);
}

BuilderOptions builder_options(const ExperimentConfig& cfg) {
    BuilderOptions opt;
    opt.tol = cfg.builder_tol;
    opt.max_iterations = cfg.builder_max_iterations;
    opt.elliptic_tol = cfg.elliptic_tol;
    opt.sobolev_order = cfg.sobolev_order;
    opt.neumann_phi = cfg.neumann_phi;
    opt.eps_min = cfg.eps_min;
    return opt;
}

StepControls step_controls(const ExperimentConfig& cfg) {
    StepControls c;
    c.cfl = cfg.cfl;
    c.dt_override = cfg.dt_override;
    c.projection_interval = cfg.projection_interval;
    c.elliptic_tol = cfg.elliptic_tol;
    c.sample_count = cfg.sample_count;
    c.energy_order = cfg.energy_order;
    c.eps_min = cfg.eps_min;
    c.record_snapshots = false;
    return c;
}

fs::path ensure_out_dir(const ExperimentConfig& cfg) {
    fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoError("write failed for " + path.string());
}

void emit_manifest(const fs::path& out, const ExperimentConfig& cfg, const std::string& command,
                   double wall_seconds, const std::vector<std::string>& artifacts) {
    std::vector<std::pair<std::string, std::string>> entries = {
        {"tool", "diskflow"},
        {"version", kToolVersion},
        {"command", command},
        {"config-hash", cfg.hash()},
        {"wall-seconds", format_seconds(wall_seconds)},
    };
    for (const std::string& a : artifacts) entries.emplace_back("artifact", a);
    write_manifest((out / "manifest.txt").string(), entries);
}

Field field_of(const ReferenceDisk& disk, int rank,
               const std::function<double(double, double, int)>& f) {
    Field out(rank, Frame::Eulerian, disk.n_r(), disk.n_theta());
    for (int c = 0; c < out.n_components(); ++c)
        for (int j = 0; j < disk.n_r(); ++j)
            for (int i = 0; i < disk.n_theta(); ++i)
                out.comp(c)(j, i) = f(disk.y1(j, i), disk.y2(j, i), c);
    return out;
}

// ---------------------------------------------------------------- build-data

int cmd_build_data(const ExperimentConfig& cfg) {
    Timer timer;
    fs::path out = ensure_out_dir(cfg);
    ReferenceDisk disk(cfg.n_r, cfg.n_theta);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    Field u0 = seed_velocity(cfg.preset, cfg.amplitude, disk);
    EosFamily eos = family_of(cfg);
    BuilderOptions opt = builder_options(cfg);
    // A zero seed yields identically zero data; the boundary sign margin is
    // then zero too and carries no information, so skip that gate.
    bool trivial_seed = u0.max_abs() == 0.0;
    if (trivial_seed) opt.require_sign = false;

    BuildResult res;
    try {
        res = build_initial_data(u0, cfg.kappa, eos, geo, opt);
    } catch (const DiskflowError& e) {
        std::string summary = "status = failed\nerror = " + std::string(e.what()) +
                              "\nconfig-hash = " + cfg.hash() + "\n";
        write_text(out / "build_summary.txt", summary);
        std::fprintf(stderr, "build-data: %s\n", e.what());
        throw;
    }

    std::vector<NamedField> fields = {{"u0", res.data.u0}, {"p0", res.data.p0},
                                      {"v0", res.data.v0}, {"phi", res.data.phi}};
    for (size_t k = 0; k < res.data.h.size(); ++k)
        fields.push_back({"h" + std::to_string(k), res.data.h[k]});
    write_field_container((out / "data.fields").string(), fields, cfg.hash());

    const IterationTrace& tr = res.trace;
    std::vector<std::vector<double>> rows;
    for (size_t nu = 0; nu < tr.M_star.size(); ++nu) {
        std::vector<double> row = {double(nu)};
        for (double mk : tr.m[nu]) row.push_back(mk);
        row.push_back(tr.m_star[nu]);
        row.push_back(tr.M_star[nu]);
        row.push_back(nu >= 1 ? tr.ratios[nu - 1] : 0.0);
        rows.push_back(row);
    }
    write_csv((out / "trace.csv").string(), cfg.hash(),
              {"nu", "m0", "m1", "m2", "m3", "m_star", "M_star", "ratio"}, rows);

    double eps = boundary_sign_values(res.data.h[0], geo).minCoeff();
    int report_order = trivial_seed ? 0 : std::min(cfg.energy_order, 2);
    EnergyReport rep = verify_uniform_energy(res.data, eos, report_order, geo, cfg.eps_min);
    double bres = 0.0;
    for (const Field& hk : res.data.h)
        bres = std::max(bres, hk.comp(0).row(0).abs().maxCoeff());

    char line[256];
    std::string summary;
    summary += "status = ok\n";
    summary += "config-hash = " + cfg.hash() + "\n";
    std::snprintf(line, sizeof line, "kappa = %.17g\n", cfg.kappa);
    summary += line;
    std::snprintf(line, sizeof line, "iterations = %d\n", res.data.iterations);
    summary += line;
    summary += std::string("floor-hit = ") + (res.data.floor_hit ? "yes" : "no") + "\n";
    std::snprintf(line, sizeof line, "eps = %.12g\n", eps);
    summary += line;
    std::snprintf(line, sizeof line, "energy-order = %d\nE_star_0 = %.12g\n", report_order,
                  rep.E_star);
    summary += line;
    std::snprintf(line, sizeof line, "boundary-residual = %.3e\n", bres);
    summary += line;
    summary += "contraction-ratios =";
    for (double r : tr.ratios) {
        std::snprintf(line, sizeof line, " %.3e", r);
        summary += line;
    }
    summary += "\n";
    write_text(out / "build_summary.txt", summary);

    emit_manifest(out, cfg, "build-data", timer.seconds(),
                  {"data.fields", "trace.csv", "build_summary.txt"});
    std::printf("build-data: eps %.6f, %d iterations, E*(0) %.6g -> %s\n", eps,
                res.data.iterations, rep.E_star, out.string().c_str());
    return 0;
}

// ----------------------------------------------------------------------- run

CompatibleData load_data(const fs::path& out, const ExperimentConfig& cfg) {
    fs::path path = out / "data.fields";
    if (!fs::exists(path))
        throw IoError("no data container at " + path.string() + "; run build-data first");
    FieldContainer c = read_field_container(path.string());
    if (c.config_hash != cfg.hash())
        throw ConfigError("data container " + path.string() + " was built under config " +
                          c.config_hash + ", current config is " + cfg.hash());
    CompatibleData data;
    auto need = [&](const std::string& name) {
        const Field* f = c.find(name);
        if (!f) throw IoError("data container is missing field " + name);
        return *f;
    };
    data.u0 = need("u0");
    data.p0 = need("p0");
    data.v0 = need("v0");
    data.phi = need("phi");
    for (int k = 0; k < 6; ++k) data.h.push_back(need("h" + std::to_string(k)));
    data.kappa = cfg.kappa;
    return data;
}

void write_run_tables(const fs::path& out, const ExperimentConfig& cfg, const RunResult& run,
                      std::vector<std::string>& artifacts) {
    std::vector<std::vector<double>> diag;
    std::vector<std::vector<double>> energy;
    int report_order = -1;
    for (const Sample& s : run.samples) {
        diag.push_back({s.t, s.E0, s.continuity_residual, s.divergence_norm, s.curl_norm,
                        s.eps, s.energy_ratio});
        if (s.has_report) {
            energy.push_back(energy_row(s.t, s.report));
            report_order = s.report.order;
        }
    }
    write_csv((out / "diagnostics.csv").string(), cfg.hash(),
              {"t", "E0", "continuity", "divergence", "curl", "eps", "energy_ratio"}, diag);
    artifacts.push_back("diagnostics.csv");
    if (!energy.empty()) {
        write_csv((out / "energy.csv").string(), cfg.hash(), energy_columns(report_order),
                  energy);
        artifacts.push_back("energy.csv");
    }
}

int cmd_run(const ExperimentConfig& cfg) {
    Timer timer;
    fs::path out = ensure_out_dir(cfg);
    ReferenceDisk disk(cfg.n_r, cfg.n_theta);
    StepControls c = step_controls(cfg);

    RunResult run;
    if (cfg.eos_family == "incompressible") {
        Field u0 = seed_velocity(cfg.preset, cfg.amplitude, disk);
        run = run_incompressible(u0, disk, cfg.T, c);
    } else {
        CompatibleData data = load_data(out, cfg);
        SimState s0 = initial_state(disk, data, family_of(cfg));
        run = run_compressible(s0, disk, cfg.T, c);
    }

    std::vector<std::string> artifacts;
    write_run_tables(out, cfg, run, artifacts);
    emit_manifest(out, cfg, "run", timer.seconds(), artifacts);

    const Sample& last = run.samples.back();
    double drift = run.samples.front().E0 != 0.0
                       ? std::abs(last.E0 - run.samples.front().E0) /
                             std::abs(run.samples.front().E0)
                       : std::abs(last.E0);
    std::printf("run: %d steps, dt %.3e, %zu samples, E0 drift %.3e, min det %.4f -> %s\n",
                run.steps, run.dt, run.samples.size(), drift, run.min_detj,
                out.string().c_str());
    return 0;
}

// --------------------------------------------------------------------- sweep

int cmd_sweep(const ExperimentConfig& cfg) {
    Timer timer;
    fs::path out = ensure_out_dir(cfg);
    ReferenceDisk disk(cfg.n_r, cfg.n_theta);
    Field u0 = seed_velocity(cfg.preset, cfg.amplitude, disk);

    SweepResult sweep = kappa_sweep(u0, cfg.kappa_list, cfg.T, cfg.energy_order, disk,
                                    builder_options(cfg), step_controls(cfg));

    std::vector<std::vector<double>> rows;
    for (const SweepRow& r : sweep.rows) {
        rows.push_back({r.kappa, r.sup_dv, r.sup_dh, r.sup_dmap, r.e0_drift,
                        r.max_energy_ratio, r.ok ? 1.0 : 0.0});
        if (!r.ok) std::fprintf(stderr, "sweep: kappa %.3g failed: %s\n", r.kappa,
                                r.message.c_str());
    }
    write_csv((out / "sweep.csv").string(), cfg.hash(),
              {"kappa", "sup_dv", "sup_dh", "sup_dmap", "e0_drift", "max_energy_ratio", "ok"},
              rows);
    emit_manifest(out, cfg, "sweep", timer.seconds(), {"sweep.csv"});

    for (const SweepRow& r : sweep.rows)
        std::printf("sweep: kappa %-8.3g sup|dv| %.6e sup|dh| %.6e drift %.2e %s\n", r.kappa,
                    r.sup_dv, r.sup_dh, r.e0_drift, r.ok ? "ok" : "FAILED");
    bool all_ok = true;
    for (const SweepRow& r : sweep.rows) all_ok = all_ok && r.ok;
    if (!all_ok) throw NoConvergence("one or more sweep runs failed", 0, 0.0);
    return 0;
}

// --------------------------------------------------------------------- check

int cmd_check(const ExperimentConfig& cfg) {
    Timer timer;
    fs::path out = ensure_out_dir(cfg);
    ReferenceDisk disk(cfg.n_r, cfg.n_theta);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    ordered_json doc;
    doc["config_hash"] = cfg.hash();
    doc["grid"] = {{"n_r", cfg.n_r}, {"n_theta", cfg.n_theta}};
    ordered_json rows = ordered_json::array();
    auto add = [&](const std::string& name, double value, double reference, double tol) {
        ordered_json row;
        row["name"] = name;
        row["value"] = value;
        if (tol > 0) {
            row["reference"] = reference;
            row["tolerance"] = tol;
            row["pass"] = std::abs(value - reference) <= tol;
        }
        rows.push_back(row);
    };

    // Lowest Dirichlet mode: ||q|| / ||grad q|| equals 1/j01 on the unit disk.
    double j01 = 2.404825557695773;
    Field bessel = field_of(disk, 0, [&](double x, double y, int) {
        return std::cyl_bessel_j(0, j01 * std::sqrt(x * x + y * y));
    });
    PoincareReport pc = poincare_check(bessel, geo);
    add("poincare_ratio_q_grad", pc.ratio_q_grad, 1.0 / j01, 1e-6);
    add("poincare_ratio_grad_lap", pc.ratio_grad_lap, 1.0 / j01, 1e-6);
    rows.push_back({{"name", "poincare_within_reference"}, {"value", pc.within_reference ? 1.0 : 0.0},
                    {"pass", pc.within_reference}});

    Field q1 = field_of(disk, 0, [](double x, double y, int) { return 1 - x * x - y * y; });
    Field q2 = field_of(disk, 0, [](double x, double y, int) { return (1 - x * x - y * y) * x; });
    add("projection_residual_radial", projection_formula_residual(q1, geo), 0.0, 1e-8);
    add("projection_residual_lopsided", projection_formula_residual(q2, geo), 0.0, 1e-8);

    Field rich = field_of(disk, 1, [](double x, double y, int c) {
        return c == 0 ? x * x * y + 0.5 * x : x * y * y - 0.5 * y;
    });
    HodgeReport hodge = hodge_check(rich, 1, geo);
    add("hodge_constant", hodge.constant, 0.0, 0.0);
    add("hodge_K", hodge.K, 0.0, 0.0);
    Field alpha = field_of(disk, 0, [](double x, double y, int) {
        return x * x * (x * x + y * y);
    });
    TraceReport trace = trace_check(alpha, geo);
    add("trace_ratio", trace.ratio, 0.0, 0.0);

    // Commutators on polynomial data; a small grid keeps the roundoff floor of
    // repeated spectral derivatives far below the tolerance.
    ReferenceDisk small(9, 16);
    GeometryCache sgeo = build_geometry(small, LagrangianMap::dilation(small, 1.3));
    Field v = field_of(small, 1, [](double x, double y, int c) { return c == 0 ? 2 * x : -2 * y; });
    Field f = field_of(small, 0, [](double x, double y, int) { return x * x * y + y * y; });
    Field harm = field_of(small, 0, [](double x, double y, int) { return x * x - y * y; });
    add("commutator_dtgrad_1", commutator_residual(CommutatorKind::DtGrad, 1, v, f, sgeo), 0.0,
        1e-9);
    add("commutator_laplacedt_1", commutator_residual(CommutatorKind::LaplaceDt, 1, v, harm, sgeo),
        0.0, 1e-9);
    add("commutator_dtgradr_2", commutator_residual(CommutatorKind::DtGradR, 2, v, f, sgeo), 0.0,
        1e-9);
    add("commutator_dtgradr_3", commutator_residual(CommutatorKind::DtGradR, 3, v, f, sgeo), 0.0,
        1e-9);

    doc["monitors"] = rows;
    bool all_pass = true;
    for (const auto& row : rows)
        if (row.contains("pass")) all_pass = all_pass && row["pass"].get<bool>();
    doc["all_pass"] = all_pass;

    write_text(out / "monitors.json", doc.dump(2) + "\n");
    emit_manifest(out, cfg, "check", timer.seconds(), {"monitors.json"});
    std::printf("check: %zu monitors, %s -> %s\n", rows.size(),
                all_pass ? "all within tolerance" : "TOLERANCE EXCEEDED",
                (out / "monitors.json").string().c_str());
    if (!all_pass) throw NoConvergence("grid monitors outside tolerance", 0, 0.0);
    return 0;
}

// -------------------------------------------------------------------- report

int column_index(const CsvData& csv, const std::string& name) {
    for (size_t i = 0; i < csv.columns.size(); ++i)
        if (csv.columns[i] == name) return int(i) + 1; // 1-based for the plot tool
    return -1;
}

int cmd_report(const ExperimentConfig& cfg) {
    Timer timer;
    fs::path out = ensure_out_dir(cfg);

    struct Table {
        std::string file;
        CsvData csv;
    };
    std::vector<Table> tables;
    for (const char* name : {"energy.csv", "diagnostics.csv", "sweep.csv", "trace.csv"}) {
        fs::path p = out / name;
        if (fs::exists(p)) tables.push_back({name, read_csv(p.string())});
    }
    if (tables.empty()) throw IoError("no tables found in " + out.string());

    const std::string& hash = tables.front().csv.config_hash;
    for (const Table& t : tables)
        if (t.csv.config_hash != hash)
            throw ConfigError("tables in " + out.string() + " carry mixed config hashes: " +
                              hash + " vs " + t.csv.config_hash + " (" + t.file + ")");

    std::string gp;
    gp += "# Plot script for the tables in this directory (config " + hash + ").\n";
    gp += "# Render with: gnuplot plots.gp\n";
    gp += "set datafile separator comma\n";
    gp += "set key autotitle columnhead\n";
    gp += "set grid\n";
    for (const Table& t : tables) {
        if (t.file == "energy.csv") {
            int er = column_index(t.csv, "Erstar"), eps = column_index(t.csv, "eps");
            gp += "\nset title 'total energy'\nset xlabel 't'\nset logscale y\n";
            gp += "plot 'energy.csv' using 1:" + std::to_string(er) + " with linespoints\n";
            gp += "pause -1 'energy: press enter'\nunset logscale y\n";
            gp += "set title 'boundary sign margin'\n";
            gp += "plot 'energy.csv' using 1:" + std::to_string(eps) + " with linespoints\n";
            gp += "pause -1 'sign margin: press enter'\n";
        } else if (t.file == "diagnostics.csv") {
            gp += "\nset title 'conserved energy and residuals'\nset xlabel 't'\n";
            gp += "plot 'diagnostics.csv' using 1:2 with linespoints\n";
            gp += "pause -1 'E0: press enter'\nset logscale y\n";
            gp += "plot 'diagnostics.csv' using 1:3 with linespoints, '' using 1:5 with linespoints\n";
            gp += "pause -1 'residuals: press enter'\nunset logscale y\n";
        } else if (t.file == "sweep.csv") {
            gp += "\nset title 'distance to the stiff limit'\nset xlabel 'kappa'\nset logscale xy\n";
            gp += "plot 'sweep.csv' using 1:2 with linespoints, '' using 1:3 with linespoints\n";
            gp += "pause -1 'sweep: press enter'\nunset logscale xy\n";
        } else if (t.file == "trace.csv") {
            int ms = column_index(t.csv, "M_star");
            gp += "\nset title 'builder difference norms'\nset xlabel 'iteration'\nset logscale y\n";
            gp += "plot 'trace.csv' using 1:" + std::to_string(ms) + " with linespoints\n";
            gp += "pause -1 'contraction: press enter'\nunset logscale y\n";
        }
    }
    write_text(out / "plots.gp", gp);
    emit_manifest(out, cfg, "report", timer.seconds(), {"plots.gp"});
    std::printf("report: %zu tables under config %s -> %s\n", tables.size(), hash.c_str(),
                (out / "plots.gp").string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-surface disk flow laboratory: data construction, trajectories, "
                 "stiffness sweeps, and grid monitors"};
    app.require_subcommand(1);

    std::string config_path, out_override, kappa_csv, resolution;
    int order_override = -1;
    app.add_option("--config", config_path, "experiment configuration file");
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_option("--kappa", kappa_csv, "comma-separated stiffness list (overrides config)");
    app.add_option("--order", order_override, "energy report order (overrides config)");
    app.add_option("--resolution", resolution, "grid as NRxNT, e.g. 33x64 (overrides config)");

    CLI::App* c_build = app.add_subcommand("build-data", "construct compatible initial data");
    CLI::App* c_run = app.add_subcommand("run", "integrate a trajectory and tabulate energies");
    CLI::App* c_sweep = app.add_subcommand("sweep", "compare runs across a stiffness list");
    CLI::App* c_check = app.add_subcommand("check", "evaluate grid and inequality monitors");
    CLI::App* c_report = app.add_subcommand("report", "emit plot scripts for existing tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (order_override >= 0) cfg.energy_order = order_override;
        if (!resolution.empty()) {
            int nr = 0, nt = 0;
            if (std::sscanf(resolution.c_str(), "%dx%d", &nr, &nt) != 2)
                throw ConfigError("--resolution expects NRxNT, got '" + resolution + "'");
            cfg.n_r = nr;
            cfg.n_theta = nt;
        }
        if (!kappa_csv.empty()) {
            std::vector<double> list;
            std::stringstream ss(kappa_csv);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    size_t used = 0;
                    double v = std::stod(item, &used);
                    if (used != item.size()) throw std::invalid_argument(item);
                    list.push_back(v);
                } catch (const std::exception&) {
                    throw ConfigError("--kappa expects numbers, got '" + item + "'");
                }
            }
            if (list.empty()) throw ConfigError("--kappa list is empty");
            cfg.kappa = list.front();
            cfg.kappa_list = list;
        }
        cfg.validate();

        if (*c_build) return cmd_build_data(cfg);
        if (*c_run) return cmd_run(cfg);
        if (*c_sweep) return cmd_sweep(cfg);
        if (*c_check) return cmd_check(cfg);
        if (*c_report) return cmd_report(cfg);
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const DiskflowError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 2;
    }
}
