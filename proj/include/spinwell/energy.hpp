// Total energy of a state, the anisotropy potential, and the effective field
// rho (the negative energy gradient in the magnetization argument, exact at
// the discrete level by construction of the quadrature adjoints).
#pragma once

#include "spinwell/basis.hpp"
#include "spinwell/vec3.hpp"

namespace spinwell {

// Uniaxial anisotropy with a C2 radial cutoff: phi(m) = K (1 - (m.a)^2) chi(|m|),
// chi = 1 on [0, cutoff/2], 0 beyond cutoff, quintic blend between. Only the
// unit-sphere neighborhood matters dynamically; the cutoff makes phi, phi',
// phi'' globally bounded with compact support.
struct AnisotropyPotential {
    Vec3 axis{0, 0, 1}; // unit easy axis
    double K = 0.5;
    double cutoff = 10.0;

    double phi(const Vec3& m) const;
    Vec3 phi_grad(const Vec3& m) const;
    void phi_hess(const Vec3& m, double H[9]) const; // row-major 3x3
};

// Validates and normalizes the axis; cutoff must exceed sqrt(3) so the unit
// ball sits well inside the plateau.
AnisotropyPotential make_anisotropy(const Vec3& axis, double K, double cutoff = 10.0);

struct EnergyBreakdown {
    double anisotropy = 0;
    double exchange = 0;
    double zeeman = 0;
    double electric = 0;
    double total = 0;
};

// Reusable buffers for the field pipeline; everything is resized on first use.
struct EnergyWork {
    GridField mgrid;
    GridField boxfield;
    CoeffsY proj_mbar;
    CoeffsY ydiff;
};

// anisotropy = int_D phi(M); exchange = 1/2 sum lambda_k c_k^2;
// zeeman = 1/2 ||B - pi_Y Mbar||^2 on the torus; electric = 1/2 ||E||^2.
EnergyBreakdown total_energy(const SpectralBases& sb, const AnisotropyPotential& pot,
                             const CoeffsH& m, const CoeffsY& b, const CoeffsY& e);

// rho = pi_n[-phi'(M) + 1_D(B - pi_Y Mbar)] + Delta M. With em_coupling off
// the induction term is dropped (diagnostic mode; rho is then no longer the
// energy gradient).
void effective_field(const SpectralBases& sb, const AnisotropyPotential& pot,
                     const CoeffsH& m, const CoeffsY& b, bool em_coupling,
                     CoeffsH& rho, EnergyWork& w);
CoeffsH effective_field(const SpectralBases& sb, const AnisotropyPotential& pot,
                        const CoeffsH& m, const CoeffsY& b, bool em_coupling = true);

// Partial gradients in the electromagnetic arguments.
CoeffsY energy_grad_B(const SpectralBases& sb, const CoeffsH& m, const CoeffsY& b);
CoeffsY energy_grad_E(const CoeffsY& e);

// Zeeman energy against the raw zero-extension Mbar instead of its torus-band
// projection; the difference to EnergyBreakdown.zeeman measures the projection
// error of the extension (comparison diagnostic).
double zeeman_unprojected(const SpectralBases& sb, const CoeffsH& m, const CoeffsY& b);

// Second derivative of the energy in M as a bilinear form on directions
// (u, v): int_D phi''(M)(U, V) + <grad u, grad v> + <pi_Y ubar, pi_Y vbar>.
// This is the exact Hessian of total_energy as computed here.
double hessian_form(const SpectralBases& sb, const AnisotropyPotential& pot,
                    const CoeffsH& m, const CoeffsH& u, const CoeffsH& v);

// Variant with the Zeeman block replaced by <u, v>_H, i.e. the form
// int phi'' + <u, v>_V. Differs from hessian_form because the projection of a
// zero-extension is a strict contraction; exposed so the gap can be measured.
double hessian_form_V(const SpectralBases& sb, const AnisotropyPotential& pot,
                      const CoeffsH& m, const CoeffsH& u, const CoeffsH& v);

} // namespace spinwell
