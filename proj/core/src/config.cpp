#include "diskflow/config.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace diskflow {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(const std::string& v, int line) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (...) {
    }
    throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
}

int parse_int(const std::string& v, int line) {
    try {
        size_t used = 0;
        int x = std::stoi(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (...) {
    }
    throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("line " + std::to_string(line) + ": expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    if (out.empty()) throw ConfigError("line " + std::to_string(line) + ": empty list");
    return out;
}

} // namespace

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "[grid]\n"
        << "n_r = " << n_r << "\n"
        << "n_theta = " << n_theta << "\n"
        << "[seed]\n"
        << "preset = " << preset << "\n"
        << "amplitude = " << fmt(amplitude) << "\n"
        << "[eos]\n"
        << "family = " << eos_family << "\n"
        << "kappa = " << fmt(kappa) << "\n"
        << "kappa_list = ";
    for (size_t i = 0; i < kappa_list.size(); ++i)
        out << (i ? ", " : "") << fmt(kappa_list[i]);
    out << "\n[run]\n"
        << "T = " << fmt(T) << "\n"
        << "cfl = " << fmt(cfl) << "\n"
        << "dt_override = " << fmt(dt_override) << "\n"
        << "sample_count = " << sample_count << "\n"
        << "energy_order = " << energy_order << "\n"
        << "projection_interval = " << projection_interval << "\n"
        << "[tolerances]\n"
        << "elliptic = " << fmt(elliptic_tol) << "\n"
        << "builder = " << fmt(builder_tol) << "\n"
        << "eps_min = " << fmt(eps_min) << "\n"
        << "[builder]\n"
        << "max_iterations = " << builder_max_iterations << "\n"
        << "sobolev_order = " << sobolev_order << "\n"
        << "neumann_phi = " << (neumann_phi ? "true" : "false") << "\n"
        << "[output]\n"
        << "dir = " << out_dir << "\n";
    return out.str();
}

std::string ExperimentConfig::hash() const {
    // FNV-1a over the canonical serialization.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (n_r < 9 || n_r > 65) fail("n_r must be in [9, 65]");
    if (n_theta < 8 || n_theta > 256 || n_theta % 2 != 0)
        fail("n_theta must be even and in [8, 256]");
    if (preset != "irrotational-quadrupole" && preset != "rigid-rotation" && preset != "zero")
        fail("unknown seed preset '" + preset + "'");
    if (eos_family != "linear" && eos_family != "incompressible")
        fail("unknown state-law family '" + eos_family + "'");
    if (!(kappa > 0)) fail("kappa must be positive");
    for (double k : kappa_list)
        if (!(k > 0)) fail("kappa_list entries must be positive");
    if (T < 0) fail("T must be nonnegative");
    if (!(cfl > 0) || cfl > 2) fail("cfl must be in (0, 2]");
    if (dt_override < 0) fail("dt_override must be nonnegative");
    if (sample_count < 1) fail("sample_count must be at least 1");
    if (energy_order < 0 || energy_order > 4) fail("energy_order must be in [0, 4]");
    if (projection_interval < 0) fail("projection_interval must be nonnegative");
    if (!(elliptic_tol >= 1e-14 && elliptic_tol <= 1e-6))
        fail("elliptic tolerance must be in [1e-14, 1e-6]");
    if (!(builder_tol > 1e-12 && builder_tol < 1e-6))
        fail("builder tolerance must be in (1e-12, 1e-6)");
    if (!(eps_min > 0)) fail("eps_min must be positive");
    if (builder_max_iterations < 1) fail("builder max_iterations must be at least 1");
    if (sobolev_order < 2 || sobolev_order > 6) fail("sobolev_order must be in [2, 6]");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        size_t hashpos = line.find('#');
        if (hashpos != std::string::npos) line = line.substr(0, hashpos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(n) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(n) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string where = section + "." + key;

        if (where == "grid.n_r") cfg.n_r = parse_int(val, n);
        else if (where == "grid.n_theta") cfg.n_theta = parse_int(val, n);
        else if (where == "seed.preset") cfg.preset = val;
        else if (where == "seed.amplitude") cfg.amplitude = parse_double(val, n);
        else if (where == "eos.family") cfg.eos_family = val;
        else if (where == "eos.kappa") cfg.kappa = parse_double(val, n);
        else if (where == "eos.kappa_list") cfg.kappa_list = parse_list(val, n);
        else if (where == "run.T") cfg.T = parse_double(val, n);
        else if (where == "run.cfl") cfg.cfl = parse_double(val, n);
        else if (where == "run.dt_override") cfg.dt_override = parse_double(val, n);
        else if (where == "run.sample_count") cfg.sample_count = parse_int(val, n);
        else if (where == "run.energy_order") cfg.energy_order = parse_int(val, n);
        else if (where == "run.projection_interval") cfg.projection_interval = parse_int(val, n);
        else if (where == "tolerances.elliptic") cfg.elliptic_tol = parse_double(val, n);
        else if (where == "tolerances.builder") cfg.builder_tol = parse_double(val, n);
        else if (where == "tolerances.eps_min") cfg.eps_min = parse_double(val, n);
        else if (where == "builder.max_iterations") cfg.builder_max_iterations = parse_int(val, n);
        else if (where == "builder.sobolev_order") cfg.sobolev_order = parse_int(val, n);
        else if (where == "builder.neumann_phi") cfg.neumann_phi = parse_bool(val, n);
        else if (where == "output.dir") cfg.out_dir = val;
        else
            throw ConfigError("line " + std::to_string(n) + ": unknown key '" + where + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Field seed_velocity(const std::string& preset, double amplitude, const ReferenceDisk& disk) {
    Field v(1, Frame::Eulerian, disk.n_r(), disk.n_theta());
    if (preset == "irrotational-quadrupole") {
        v.comp(0) = amplitude * disk.y1_grid();
        v.comp(1) = -amplitude * disk.y2_grid();
    } else if (preset == "rigid-rotation") {
        v.comp(0) = -amplitude * disk.y2_grid();
        v.comp(1) = amplitude * disk.y1_grid();
    } else if (preset == "zero") {
        // already zero
    } else {
        throw ConfigError("unknown seed preset '" + preset + "'");
    }
    return v;
}

} // namespace diskflow
