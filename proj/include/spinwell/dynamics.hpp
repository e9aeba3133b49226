// The assembled vector fields of the coupled finite-dimensional system: the
// magnetization drift F (precession + damping + Ito correction), the Maxwell
// right-hand sides, and the stacked diffusion fields. One evaluation entry
// point shares the synthesized grids between all pieces; per-step diagnostics
// fall out of the same pipeline nearly for free.
#pragma once

#include <vector>

#include "spinwell/basis.hpp"
#include "spinwell/energy.hpp"
#include "spinwell/noise.hpp"

namespace spinwell {

struct GalerkinState {
    CoeffsH m;
    CoeffsY b;
    CoeffsY e;
    double t = 0.0;
};

GalerkinState zero_state(const SpectralBases& sb);

struct StateDerivative {
    CoeffsH dm;
    CoeffsY db;
    CoeffsY de;
};

// Applied current f in the magnetization band (constant in time), extended by
// zero outside D wherever a torus field is needed.
struct Forcing {
    bool active = false;
    CoeffsH coeffs;
    GridField box_values; // nodal values on D, cached
};

Forcing make_forcing(const SpectralBases& sb, const CoeffsH& coeffs);
Forcing no_forcing();

// Parameters plus reusable workspace. The workspace makes evaluation calls
// non-reentrant per Dynamics instance; give each thread its own copy.
struct Dynamics {
    const SpectralBases* sb = nullptr;
    AnisotropyPotential pot;
    NoiseFamily noise;
    double lambda1 = 1.0;
    double lambda2 = 0.2;
    Forcing forcing;
    bool em_coupling = true;
    double db_sign = -1.0; // induction law db = db_sign * curl E

    // scratch
    EnergyWork ew;
    NoiseWork nw;
    std::vector<double> psi;
    CoeffsH rho, htmp;
    CoeffsY ytmp;
    GridField rho_grid, mxr, mmxr, ebox;
};

Dynamics make_dynamics(const SpectralBases& sb, const AnisotropyPotential& pot,
                       NoiseFamily noise, double lambda1, double lambda2,
                       Forcing forcing, bool em_coupling = true, double db_sign = -1.0);

// Quantities captured from the grids already present during a drift
// evaluation at a state. rate() is the exact dissipation rate of the discrete
// energy along the deterministic flow.
struct StepDiag {
    EnergyBreakdown energy;
    double diss_mxrho = 0;   // quadrature of |M x rho|^2 over D
    double diss_electric = 0; // quadrature of |E|^2 over D
    double forcing_power = 0; // quadrature of E . f over D
    double sphere_max_dev = 0;
    double h_norm2_m = 0;
    double v_norm2_m = 0;
    double rate(double lambda2) const {
        return -lambda2 * diss_mxrho - diss_electric - forcing_power;
    }
};

// Full drift evaluation at a state. ito = true adds the five-term correction
// to the magnetization component (the Ito drift); ito = false gives the pure
// Stratonovich drift used by the Heun stepper. When gs is non-null it is
// filled with all J diffusion fields at the same state, reusing the grids.
void full_drift(Dynamics& dyn, const GalerkinState& s, bool ito, StateDerivative& out,
                std::vector<CoeffsH>* gs = nullptr, StepDiag* diag = nullptr);

// Standalone pieces, for tests and diagnostics.
void drift_F(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, CoeffsH& out);
void strat_drift_M(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, CoeffsH& out);
void maxwell_rhs(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, const CoeffsY& e,
                 CoeffsY& de, CoeffsY& db);
void full_diffusion(Dynamics& dyn, const GalerkinState& s, int j, StateDerivative& out);

} // namespace spinwell
