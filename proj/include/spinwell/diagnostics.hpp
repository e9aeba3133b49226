// Measurable residuals of the structural identities of the discrete system,
// moment and regularity estimators for ensembles, and the independent oracles
// the test suite freezes its reference values against.
#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinwell/integrator.hpp"

namespace spinwell {

// |2<M, F(M)> + sum_j ||G_j(M)||^2| with the Ito drift F; relative divides by
// ||M||_H^2. Vanishes to rounding for spatially constant noise profiles.
struct NormIdentityCheck {
    double resid = 0;
    double relative = 0;
};
NormIdentityCheck check_norm_identity(Dynamics& dyn, const GalerkinState& s);

// Trapezoid defect of the pathwise energy balance over a recorded trajectory.
// accumulated sums the per-step defects (scales like dt^2 under refinement);
// max_step is the largest single step.
struct EnergyIdentityCheck {
    double accumulated = 0;
    double max_step = 0;
};
EnergyIdentityCheck check_energy_identity(const Trajectory& tr);

// Largest drift of any div B mode coefficient from its initial value.
double check_div_B(const Trajectory& tr);

// Deviation of |M| from 1 at the quadrature nodes: max and quadrature-weighted
// L2 value.
struct SphereCheck {
    double max_dev = 0;
    double l2_dev = 0;
};
SphereCheck check_sphere_constraint(const MagnetizationBasis& mb, const CoeffsH& m);

// Residual of <u x Au, v>_H = sum_i <d_i u, d_i v x u>_H with A the negative
// Laplacian, relative to the larger side. Exact for band-limited u, v: every
// integrand is an even trigonometric polynomial inside the quadrature's
// exactness range.
double check_cross_identity(const MagnetizationBasis& mb, const CoeffsH& u,
                            const CoeffsH& v);

// Normalized residual of each structural identity at one state.
struct IdentitySweep {
    double mg_orth = 0;        // max_j |<M, G_j>| / (||M|| ||G_j||)
    double norm_resid = 0;     // |2<M,F> + sum ||G_j||^2| / ||M||^2
    double rho_precession = 0; // |<rho, pi[M x rho]>| / (||rho|| ||pi[M x rho]||)
    double rho_damping = 0;    // |<rho, pi[M x (M x rho)]> + Q|M x rho|^2| / Q|M x rho|^2
    double curl_pairing = 0;   // |<B - pi Mbar, curl E> - <E, curl(B - pi Mbar)>| / max side
};
IdentitySweep identity_sweep(Dynamics& dyn, const GalerkinState& s);

struct MomentReport {
    std::string name;
    double mean = 0, se = 0;       // the functional itself
    double mean_sq = 0, se_sq = 0; // its square, the next moment family up
    double jensen_gap = 0;         // mean_sq - mean^2; negative only by rounding
};
std::vector<MomentReport> moment_estimates(const EnsembleStats& st);

// Holder exponent of t -> M(t) in the H norm: least-squares slope of
// log RMS ||M(t+L) - M(t)||_H against log lag over dyadic lags. Runs its own
// simulation so it can keep the full coefficient history. Returns +infinity
// when the trajectory is constant to rounding.
double holder_estimate(Dynamics& dyn, const GalerkinState& init,
                       const BrownianPath& path, Scheme scheme = Scheme::Heun);

// Central difference of the total energy along the direction dir in the
// magnetization argument.
double oracle_fd_energy_gradient(const SpectralBases& sb, const AnisotropyPotential& pot,
                                 const GalerkinState& s, const CoeffsH& dir, double eps);

// Four-point central difference giving the bilinear Hessian form on (u, v).
double oracle_fd_energy_hessian(const SpectralBases& sb, const AnisotropyPotential& pot,
                                const GalerkinState& s, const CoeffsH& u,
                                const CoeffsH& v, double eps);

// Nodal central difference of the stacked diffusion fields along themselves:
// 1/2 sum_j [g_j(m + eps g_j) - g_j(m - eps g_j)] / (2 eps), no projections
// anywhere. Agrees with ito_correction_unprojected wherever psi is locally
// identically 1.
void oracle_fd_correction(const NoiseFamily& nf, const GridField& mgrid,
                          double l1, double l2, double eps, GridField& out);

// Projection of a pointwise field onto the magnetization band at doubled
// quadrature resolution, long double accumulation, direct cosine evaluation
// per node and mode. Shares no transform code with the library path. fn must
// write the field value at (x, y, z) into its last argument (3 doubles).
// Layout of the result matches CoeffsH::c (component planes back to back).
std::vector<double> oracle_dense_projection(
    const MagnetizationBasis& mb,
    const std::function<void(double, double, double, double*)>& fn);

// Classical RK4 reference for the spatially constant reduced dynamics
// dm/dt = l1 m x r - l2 m x (m x r), r = 2K (m.a) a, integrated to T at step
// dt_ref (rounded to divide T).
Vec3 oracle_reduced_llg(Vec3 m0, const Vec3& axis, double K, double l1, double l2,
                        double T, double dt_ref);

// Random band-limited magnetization with smoothly decaying spectrum, scaled
// so the largest nodal |M| equals target_max (kept inside the psi plateau by
// default, where the identities are exact).
CoeffsH random_coeffs_H(const MagnetizationBasis& mb, std::mt19937_64& eng,
                        double target_max = 2.0);

// Full random state: magnetization as above; E and B coefficients with mild
// spectral decay, unit L2 norm.
GalerkinState random_state(const SpectralBases& sb, std::mt19937_64& eng,
                           double target_max = 2.0);

} // namespace spinwell
