// Run configuration: key=value text with '#' comments, strict unknown-key and
// malformed-value errors carrying line numbers, canonical printing that
// round-trips bit exactly, and the builders turning a config into live
// simulation objects.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "spinwell/dynamics.hpp"
#include "spinwell/integrator.hpp"
#include "spinwell/vec3.hpp"

namespace spinwell {

struct SimConfig {
    std::array<double, 3> box{3.14159265358979323846, 3.14159265358979323846,
                              3.14159265358979323846};
    std::array<int, 3> modes{8, 8, 8};
    std::array<int, 3> em_bands{8, 8, 8};
    int torus_ratio = 2;
    std::array<int, 3> quad_nodes{0, 0, 0}; // 0 = auto (4n+1 per axis)
    double lambda1 = 1.0;
    double lambda2 = 0.2;
    double aniso_K = 0.5;
    Vec3 aniso_axis{0, 0, 1};
    double aniso_cutoff = 10.0;
    int noise_J = 8;
    double noise_amp = 0.25;
    double noise_decay = 2.0;
    std::string noise_profile = "constant"; // constant | eigen
    std::string forcing = "zero";           // zero | uniform
    Vec3 forcing_value{0, 0, 0};
    double T = 1.0;
    double dt = 1e-3;
    std::uint64_t seed = 12345;
    std::string scheme = "heun"; // heun | em-ito
    int ensemble_K = 64;
    std::string init_M = "wall"; // wall | constant
    Vec3 init_M_dir{0, 0, 1};
    std::string init_B = "zero"; // zero | uniform | curl
    Vec3 init_B_value{0, 0, 0};
    std::string init_E = "zero"; // zero | uniform
    Vec3 init_E_value{0, 0, 0};
    int out_every = 10;
    std::string out_dir = ".";
    std::string db_sign = "galerkin"; // galerkin | problem
    bool em_coupling = true;
    bool renormalize = false;
};

// Parse key=value lines. Unknown keys and malformed values raise ConfigError
// naming the line. Later assignments win. modes / em_bands / quad_nodes take
// a single integer or an a,b,c triple; vectors take a,b,c.
SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);

// One "key=value" override (the CLI --set flag); same grammar as a file line.
void apply_override(SimConfig& cfg, const std::string& kv);

// Cross-field constraints: positive geometry, lambda2 > 0, even torus ratio,
// enum values, and the explicit stability screen
// dt * lambda_max * max(lambda1, lambda2, 1) <= 2.
void validate(const SimConfig& cfg);

// Canonical text form, every key in fixed order, %.17g numbers.
// parse_config(print_config(cfg)) reproduces cfg exactly.
std::string print_config(const SimConfig& cfg);

// Everything a run needs. The bases sit behind a stable address because the
// dynamics keeps a pointer to them.
struct SimSetup {
    std::unique_ptr<SpectralBases> sb;
    Dynamics dyn;
    GalerkinState init;
    long steps = 0;
    SimOptions opt;
};

// Validates, builds bases / dynamics / initial data / stepper options.
SimSetup build_setup(const SimConfig& cfg);

// Initial data presets, exposed for the tests. The wall profile is normalized
// to unit length at the nodes before projection; the curl preset for B is a
// coefficient-space curl and therefore exactly divergence free.
CoeffsH initial_magnetization(const SpectralBases& sb, const SimConfig& cfg);
CoeffsY initial_B(const SpectralBases& sb, const SimConfig& cfg);
CoeffsY initial_E(const SpectralBases& sb, const SimConfig& cfg);

} // namespace spinwell
