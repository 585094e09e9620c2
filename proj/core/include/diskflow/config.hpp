#pragma once

#include <string>
#include <vector>

#include "diskflow/field.hpp"

namespace diskflow {

// Flat sectioned key-value experiment description; every output file carries
// hash() of the canonical serialization so artifacts can be matched to the
// configuration that produced them.
struct ExperimentConfig {
    // [grid]
    int n_r = 33;
    int n_theta = 64;
    // [seed]
    std::string preset = "irrotational-quadrupole";
    double amplitude = 2.0;
    // [eos]
    std::string eos_family = "linear"; // or "incompressible"
    double kappa = 100.0;
    std::vector<double> kappa_list = {100.0, 1000.0, 10000.0};
    // [run]
    double T = 0.2;
    double cfl = 0.4;
    double dt_override = 0.0;
    int sample_count = 20;
    int energy_order = 2;
    int projection_interval = 10;
    // [tolerances]
    double elliptic_tol = 1e-10;
    double builder_tol = 1e-9;
    double eps_min = 1e-6;
    // [builder]
    int builder_max_iterations = 40;
    int sobolev_order = 5;
    bool neumann_phi = false;
    // [output]
    std::string out_dir = "out";

    std::string canonical() const;
    std::string hash() const;
    void validate() const; // throws ConfigError outside documented ranges
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Divergence-free seed velocities: "irrotational-quadrupole" (amplitude a
// gives (a x1, -a x2)), "rigid-rotation" (angular rate = amplitude), "zero".
Field seed_velocity(const std::string& preset, double amplitude, const ReferenceDisk& disk);

} // namespace diskflow
