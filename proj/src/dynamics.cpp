// Assembly of the coupled drift and diffusion fields. The evaluation order is
// arranged so every synthesized grid is produced once per state and consumed
// by the magnetization drift, the Maxwell right sides, the diffusion fields,
// and the per-step diagnostics alike.
#include "spinwell/dynamics.hpp"

#include <cmath>

#include "spinwell/errors.hpp"
#include "spinwell/kernels.hpp"

namespace spinwell {
namespace {

void grid_cross(const GridField& a, const GridField& b, GridField& out) {
    out.dom = a.dom;
    out.n = a.n;
    out.v.resize(a.v.size());
    kern::ops().cross(a.comp(0), a.comp(1), a.comp(2), b.comp(0), b.comp(1), b.comp(2),
                      out.comp(0), out.comp(1), out.comp(2), a.nodes());
}

} // namespace

GalerkinState zero_state(const SpectralBases& sb) {
    GalerkinState s;
    s.m = CoeffsH::zeros(sb.mag.modes);
    s.b = CoeffsY::zeros(sb.em.bands);
    s.e = CoeffsY::zeros(sb.em.bands);
    return s;
}

Forcing make_forcing(const SpectralBases& sb, const CoeffsH& coeffs) {
    Forcing f;
    f.active = true;
    f.coeffs = coeffs;
    f.box_values = synthesize_H(sb.mag, coeffs);
    return f;
}

Forcing no_forcing() { return Forcing{}; }

Dynamics make_dynamics(const SpectralBases& sb, const AnisotropyPotential& pot,
                       NoiseFamily noise, double lambda1, double lambda2,
                       Forcing forcing, bool em_coupling, double db_sign) {
    if (!(lambda2 > 0.0))
        throw ConfigError("lambda2 must be strictly positive: the damping term is "
                          "what dissipates energy and underpins well-posedness");
    Dynamics d;
    d.sb = &sb;
    d.pot = pot;
    d.noise = std::move(noise);
    d.lambda1 = lambda1;
    d.lambda2 = lambda2;
    d.forcing = std::move(forcing);
    d.em_coupling = em_coupling;
    d.db_sign = db_sign;
    return d;
}

void full_drift(Dynamics& dyn, const GalerkinState& s, bool ito, StateDerivative& out,
                std::vector<CoeffsH>* gs, StepDiag* diag) {
    const SpectralBases& sb = *dyn.sb;

    // rho and the shared grids: ew.mgrid = M on nodes, ew.ydiff = B - pi Mbar.
    effective_field(sb, dyn.pot, s.m, s.b, dyn.em_coupling, dyn.rho, dyn.ew);
    psi_values(dyn.ew.mgrid, dyn.psi);

    // Magnetization drift: l1 pi[M x rho] - l2 pi[M x (M x rho)].
    synthesize_H(sb.mag, dyn.rho, dyn.rho_grid);
    grid_cross(dyn.ew.mgrid, dyn.rho_grid, dyn.mxr);
    grid_cross(dyn.ew.mgrid, dyn.mxr, dyn.mmxr);
    if (diag)
        diag->diss_mxrho =
            sb.mag.weight * kern::ops().dot(dyn.mxr.v.data(), dyn.mxr.v.data(), dyn.mxr.v.size());
    kern::ops().scale(dyn.mxr.v.data(), dyn.lambda1, dyn.mxr.v.size());
    kern::ops().axpy(dyn.mxr.v.data(), -dyn.lambda2, dyn.mmxr.v.data(), dyn.mxr.v.size());
    project_H(sb.mag, dyn.mxr, out.dm);
    if (ito) {
        ito_correction(sb.mag, dyn.noise, dyn.ew.mgrid, dyn.psi, dyn.lambda1, dyn.lambda2,
                       dyn.htmp, dyn.nw);
        kern::ops().axpy(out.dm.c.data(), 1.0, dyn.htmp.c.data(), out.dm.c.size());
    }

    // Maxwell. de = -pi[1_D(E + f)] + curl(B - pi Mbar); db = db_sign curl E.
    synthesize_Y_at_box(sb, s.e, dyn.ebox);
    if (diag) {
        diag->diss_electric =
            sb.mag.weight * kern::ops().dot(dyn.ebox.v.data(), dyn.ebox.v.data(), dyn.ebox.v.size());
        diag->forcing_power =
            dyn.forcing.active
                ? sb.mag.weight * kern::ops().dot(dyn.ebox.v.data(),
                                                  dyn.forcing.box_values.v.data(),
                                                  dyn.ebox.v.size())
                : 0.0;
    }
    if (dyn.forcing.active)
        kern::ops().axpy(dyn.ebox.v.data(), 1.0, dyn.forcing.box_values.v.data(),
                         dyn.ebox.v.size());
    project_box_to_Y(sb, dyn.ebox, out.de);
    kern::ops().scale(out.de.c.data(), -1.0, out.de.c.size());
    apply_curl(sb.em, dyn.em_coupling ? dyn.ew.ydiff : s.b, dyn.ytmp);
    kern::ops().axpy(out.de.c.data(), 1.0, dyn.ytmp.c.data(), out.de.c.size());
    apply_curl(sb.em, s.e, out.db);
    kern::ops().scale(out.db.c.data(), dyn.db_sign, out.db.c.size());

    if (gs) {
        gs->resize(dyn.noise.J);
        for (int j = 0; j < dyn.noise.J; ++j)
            diffusion_G(sb.mag, dyn.noise, j, dyn.ew.mgrid, dyn.psi, dyn.lambda1,
                        dyn.lambda2, (*gs)[j], dyn.nw);
    }

    if (diag) {
        double aniso = 0.0;
        double dev = 0.0;
        const double* mx = dyn.ew.mgrid.comp(0);
        const double* my = dyn.ew.mgrid.comp(1);
        const double* mz = dyn.ew.mgrid.comp(2);
        for (std::size_t i = 0; i < sb.mag.n_nodes; ++i) {
            const Vec3 m{mx[i], my[i], mz[i]};
            aniso += dyn.pot.phi(m);
            dev = std::max(dev, std::fabs(norm(m) - 1.0));
        }
        diag->energy.anisotropy = sb.mag.weight * aniso;
        diag->energy.exchange = 0.5 * grad_norm2(sb.mag, s.m);
        if (!dyn.em_coupling) {
            // effective_field skipped the projection; the energy still wants it.
            project_box_to_Y(sb, dyn.ew.mgrid, dyn.ew.proj_mbar);
            dyn.ew.ydiff = s.b;
            kern::ops().axpy(dyn.ew.ydiff.c.data(), -1.0, dyn.ew.proj_mbar.c.data(),
                             dyn.ew.ydiff.c.size());
        }
        diag->energy.zeeman = 0.5 * l2_norm2(dyn.ew.ydiff);
        diag->energy.electric = 0.5 * l2_norm2(s.e);
        diag->energy.total = diag->energy.anisotropy + diag->energy.exchange +
                             diag->energy.zeeman + diag->energy.electric;
        diag->sphere_max_dev = dev;
        diag->h_norm2_m = h_norm2(s.m);
        diag->v_norm2_m = v_norm2(sb.mag, s.m);
    }
}

void drift_F(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, CoeffsH& out) {
    GalerkinState s;
    s.m = m;
    s.b = b;
    s.e = CoeffsY::zeros(dyn.sb->em.bands);
    StateDerivative d;
    full_drift(dyn, s, true, d);
    out = std::move(d.dm);
}

void strat_drift_M(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, CoeffsH& out) {
    GalerkinState s;
    s.m = m;
    s.b = b;
    s.e = CoeffsY::zeros(dyn.sb->em.bands);
    StateDerivative d;
    full_drift(dyn, s, false, d);
    out = std::move(d.dm);
}

void maxwell_rhs(Dynamics& dyn, const CoeffsH& m, const CoeffsY& b, const CoeffsY& e,
                 CoeffsY& de, CoeffsY& db) {
    GalerkinState s;
    s.m = m;
    s.b = b;
    s.e = e;
    StateDerivative d;
    full_drift(dyn, s, false, d);
    de = std::move(d.de);
    db = std::move(d.db);
}

void full_diffusion(Dynamics& dyn, const GalerkinState& s, int j, StateDerivative& out) {
    synthesize_H(dyn.sb->mag, s.m, dyn.ew.mgrid);
    psi_values(dyn.ew.mgrid, dyn.psi);
    diffusion_G(dyn.sb->mag, dyn.noise, j, dyn.ew.mgrid, dyn.psi, dyn.lambda1,
                dyn.lambda2, out.dm, dyn.nw);
    out.db = CoeffsY::zeros(dyn.sb->em.bands);
    out.de = CoeffsY::zeros(dyn.sb->em.bands);
}

} // namespace spinwell
