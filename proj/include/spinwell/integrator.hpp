// Time stepping: Brownian path management, the Stratonovich Heun stepper and
// its Euler-Maruyama twin on the Ito form, trajectory recording with per-step
// conservation diagnostics, and Monte-Carlo ensembles.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinwell/dynamics.hpp"

namespace spinwell {

// Increments dW_j ~ N(0, dt), laid out steps x J. The stream is derived from
// (master_seed, path_index) only, so ensembles are reproducible path by path
// regardless of scheduling.
struct BrownianPath {
    std::uint64_t master_seed = 0;
    int path_index = 0;
    int J = 0;
    long steps = 0;
    double dt = 0.0;
    std::vector<double> dw;

    const double* row(long k) const { return dw.data() + static_cast<std::size_t>(k) * J; }
};

BrownianPath make_brownian_path(std::uint64_t master_seed, int path_index, int J,
                                long steps, double dt);

// Same Brownian path on a grid coarsened by an integer factor: consecutive
// increments summed. steps must divide evenly.
BrownianPath coarsen_path(const BrownianPath& fine, int factor);

enum class Scheme { Heun, EulerMaruyamaIto };

struct SimOptions {
    Scheme scheme = Scheme::Heun;
    int out_every = 10;
    bool record_rows = true;
    bool record_norm_resid = true; // extra Ito drift evaluation per sample row
    bool renormalize = false;      // nodal renormalization after each step (comparison tool)
    double blowup_threshold = 1e12;
};

// One CSV row of a trajectory.
struct SampleRow {
    double t = 0;
    double h_norm_m = 0;
    double v_norm_m = 0;
    double e_aniso = 0;
    double e_exch = 0;
    double e_zeeman = 0;
    double e_elec = 0;
    double e_total = 0;
    double divb_resid = 0;       // max mode drift of div B from its initial value
    double sphere_max_dev = 0;
    double norm_ident_resid = 0; // |2<M,F>+sum||G||^2| / ||M||^2 at this state
    double energy_ident_resid = 0; // defect of the step ending here
};

struct Trajectory {
    std::vector<SampleRow> rows;
    std::vector<double> step_energy_defect; // one per step, trapezoid defect
    double max_divb_drift = 0;
    double max_energy_defect = 0;
    double max_energy_increase = 0; // > 0 only if the energy ever rose
    // Running functionals of the a-priori estimates.
    double sup_v_norm2 = 0;    // sup_t ||M||_V^2
    double sup_zeeman2 = 0;    // sup_t ||B - pi Mbar||^2
    double sup_electric2 = 0;  // sup_t ||E||^2
    double int_mxrho2 = 0;     // int_0^T quadrature |M x rho|^2 dt (trapezoid)
    GalerkinState final_state;
};

// Scratch for one stepper invocation.
struct StepWork {
    StateDerivative d0, d1;
    std::vector<CoeffsH> g0, g1;
    GalerkinState pred;
};

// Advance state by one step. diag, when given, is filled at the pre-step
// state. dw may be null when the noise family is empty.
void step_heun(Dynamics& dyn, GalerkinState& s, double dt, const double* dw,
               StepWork& w, StepDiag* diag = nullptr);
void step_em_ito(Dynamics& dyn, GalerkinState& s, double dt, const double* dw,
                 StepWork& w, StepDiag* diag = nullptr);

// Run path.steps steps of size path.dt from init. Throws NumericalAbort when
// any coefficient magnitude passes the blow-up threshold.
Trajectory simulate(Dynamics& dyn, const GalerkinState& init, const BrownianPath& path,
                    const SimOptions& opt);

struct PathResult {
    int index = 0;
    bool failed = false;
    std::string error;
    double sup_v_norm2 = 0;
    double sup_zeeman2 = 0;
    double sup_electric2 = 0;
    double int_mxrho2 = 0;
    double final_energy = 0;
};

struct Moment {
    double mean = 0;
    double se = 0;
    double mean_sq = 0; // second power of the functional (p = 4 moment family)
    double se_sq = 0;
};

struct EnsembleStats {
    int K = 0;
    int failed = 0;
    Moment sup_v_norm2, sup_zeeman2, sup_electric2, int_mxrho2;
    std::vector<PathResult> paths;
};

// K independent paths from one master seed. threads <= 0 reads
// SPINWELL_THREADS (default 1). Aggregation runs in path order whatever the
// thread count, so the stats are reproducible.
EnsembleStats run_ensemble(const Dynamics& prototype, const GalerkinState& init,
                           long steps, double dt, std::uint64_t master_seed, int K,
                           const SimOptions& opt, int threads = 0);

} // namespace spinwell
