// Energy functional, anisotropy potential, effective field. The gradient
// consistency tests lean on rho being assembled from the exact quadrature
// adjoints of the maps used in total_energy, so the two must stay in lockstep.
#include "spinwell/energy.hpp"

#include <cmath>
#include <string>

#include "smoothstep.hpp"
#include "spinwell/errors.hpp"
#include "spinwell/kernels.hpp"

namespace spinwell {

using detail::smooth_s;
using detail::smooth_ds;
using detail::smooth_d2s;

double AnisotropyPotential::phi(const Vec3& m) const {
    const double p = dot(m, axis);
    const double g = 1.0 - p * p;
    const double r = norm(m);
    const double half = 0.5 * cutoff;
    if (r <= half)
        return K * g;
    if (r >= cutoff)
        return 0.0;
    return K * g * (1.0 - smooth_s((r - half) / half));
}

Vec3 AnisotropyPotential::phi_grad(const Vec3& m) const {
    const double p = dot(m, axis);
    const double r = norm(m);
    const double half = 0.5 * cutoff;
    if (r <= half)
        return (-2.0 * K * p) * axis;
    if (r >= cutoff)
        return Vec3{0, 0, 0};
    const double t = (r - half) / half;
    const double chi = 1.0 - smooth_s(t);
    const double dchi = -smooth_ds(t) / half;
    const double g = 1.0 - p * p;
    Vec3 out = (-2.0 * K * p * chi) * axis;
    out += (K * g * dchi / r) * m;
    return out;
}

void AnisotropyPotential::phi_hess(const Vec3& m, double H[9]) const {
    const double p = dot(m, axis);
    const double r = norm(m);
    const double half = 0.5 * cutoff;
    const double a[3] = {axis.x, axis.y, axis.z};
    if (r <= half) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                H[3 * i + j] = -2.0 * K * a[i] * a[j];
        return;
    }
    if (r >= cutoff) {
        for (int i = 0; i < 9; ++i)
            H[i] = 0.0;
        return;
    }
    const double t = (r - half) / half;
    const double chi = 1.0 - smooth_s(t);
    const double dchi = -smooth_ds(t) / half;
    const double d2chi = -smooth_d2s(t) / (half * half);
    const double g = 1.0 - p * p;
    const double mh[3] = {m.x / r, m.y / r, m.z / r};
    // grad g = -2 p a; hess g = -2 a a^T.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double h = chi * (-2.0 * a[i] * a[j]);
            h += dchi * (-2.0 * p) * (a[i] * mh[j] + mh[i] * a[j]);
            h += g * (d2chi * mh[i] * mh[j] +
                      dchi * ((i == j ? 1.0 : 0.0) - mh[i] * mh[j]) / r);
            H[3 * i + j] = K * h;
        }
}

AnisotropyPotential make_anisotropy(const Vec3& axis, double K, double cutoff) {
    const double n = norm(axis);
    if (!(n > 0.0))
        throw ConfigError("anisotropy axis must be nonzero");
    if (K < 0.0)
        throw ConfigError("anisotropy strength must be nonnegative, got " + std::to_string(K));
    if (!(cutoff > std::sqrt(3.0)))
        throw ConfigError("anisotropy cutoff radius must exceed sqrt(3), got " +
                          std::to_string(cutoff));
    AnisotropyPotential pot;
    pot.axis = (1.0 / n) * axis;
    pot.K = K;
    pot.cutoff = cutoff;
    return pot;
}

namespace {

Vec3 node_vec(const GridField& f, std::size_t i) {
    return Vec3{f.comp(0)[i], f.comp(1)[i], f.comp(2)[i]};
}

} // namespace

EnergyBreakdown total_energy(const SpectralBases& sb, const AnisotropyPotential& pot,
                             const CoeffsH& m, const CoeffsY& b, const CoeffsY& e) {
    EnergyBreakdown out;
    GridField mg = synthesize_H(sb.mag, m);
    double aniso = 0.0;
    for (std::size_t i = 0; i < sb.mag.n_nodes; ++i)
        aniso += pot.phi(node_vec(mg, i));
    out.anisotropy = sb.mag.weight * aniso;
    out.exchange = 0.5 * grad_norm2(sb.mag, m);
    CoeffsY diff = project_box_to_Y(sb, mg);
    kern::ops().scale(diff.c.data(), -1.0, diff.c.size());
    kern::ops().axpy(diff.c.data(), 1.0, b.c.data(), diff.c.size());
    out.zeeman = 0.5 * l2_norm2(diff);
    out.electric = 0.5 * l2_norm2(e);
    out.total = out.anisotropy + out.exchange + out.zeeman + out.electric;
    return out;
}

void effective_field(const SpectralBases& sb, const AnisotropyPotential& pot,
                     const CoeffsH& m, const CoeffsY& b, bool em_coupling,
                     CoeffsH& rho, EnergyWork& w) {
    synthesize_H(sb.mag, m, w.mgrid);
    if (em_coupling) {
        project_box_to_Y(sb, w.mgrid, w.proj_mbar);
        w.ydiff = b;
        kern::ops().axpy(w.ydiff.c.data(), -1.0, w.proj_mbar.c.data(), w.ydiff.c.size());
        synthesize_Y_at_box(sb, w.ydiff, w.boxfield);
    } else {
        w.boxfield = GridField::zeros(Domain::Box, sb.mag.nodes);
    }
    for (std::size_t i = 0; i < sb.mag.n_nodes; ++i) {
        const Vec3 dphi = pot.phi_grad(node_vec(w.mgrid, i));
        w.boxfield.comp(0)[i] -= dphi.x;
        w.boxfield.comp(1)[i] -= dphi.y;
        w.boxfield.comp(2)[i] -= dphi.z;
    }
    project_H(sb.mag, w.boxfield, rho);
    for (int k = 0; k < 3; ++k) {
        double* r = rho.comp(k);
        const double* mc = m.comp(k);
        for (int s = 0; s < sb.mag.n_scalar; ++s)
            r[s] -= sb.mag.eigenvalues[s] * mc[s];
    }
}

CoeffsH effective_field(const SpectralBases& sb, const AnisotropyPotential& pot,
                        const CoeffsH& m, const CoeffsY& b, bool em_coupling) {
    CoeffsH rho;
    EnergyWork w;
    effective_field(sb, pot, m, b, em_coupling, rho, w);
    return rho;
}

CoeffsY energy_grad_B(const SpectralBases& sb, const CoeffsH& m, const CoeffsY& b) {
    CoeffsY out = project_box_to_Y(sb, synthesize_H(sb.mag, m));
    kern::ops().scale(out.c.data(), -1.0, out.c.size());
    kern::ops().axpy(out.c.data(), 1.0, b.c.data(), out.c.size());
    return out;
}

CoeffsY energy_grad_E(const CoeffsY& e) { return e; }

double zeeman_unprojected(const SpectralBases& sb, const CoeffsH& m, const CoeffsY& b) {
    GridField ext = extend_by_zero(sb, synthesize_H(sb.mag, m));
    GridField bg = synthesize_Y(sb.em, b);
    kern::ops().scale(ext.v.data(), -1.0, ext.v.size());
    kern::ops().axpy(ext.v.data(), 1.0, bg.v.data(), ext.v.size());
    return 0.5 * inner_product(sb.em, ext, ext);
}

namespace {

double hessian_aniso_part(const SpectralBases& sb, const AnisotropyPotential& pot,
                          const CoeffsH& m, const CoeffsH& u, const CoeffsH& v) {
    GridField mg = synthesize_H(sb.mag, m);
    GridField ug = synthesize_H(sb.mag, u);
    GridField vg = synthesize_H(sb.mag, v);
    double s = 0.0;
    double H[9];
    for (std::size_t i = 0; i < sb.mag.n_nodes; ++i) {
        pot.phi_hess(node_vec(mg, i), H);
        const Vec3 uu = node_vec(ug, i);
        const Vec3 vv = node_vec(vg, i);
        const double hv[3] = {H[0] * vv.x + H[1] * vv.y + H[2] * vv.z,
                              H[3] * vv.x + H[4] * vv.y + H[5] * vv.z,
                              H[6] * vv.x + H[7] * vv.y + H[8] * vv.z};
        s += uu.x * hv[0] + uu.y * hv[1] + uu.z * hv[2];
    }
    return sb.mag.weight * s;
}

double exchange_pairing(const SpectralBases& sb, const CoeffsH& u, const CoeffsH& v) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double* up = u.comp(k);
        const double* vp = v.comp(k);
        for (int i = 0; i < sb.mag.n_scalar; ++i)
            s += sb.mag.eigenvalues[i] * up[i] * vp[i];
    }
    return s;
}

} // namespace

double hessian_form(const SpectralBases& sb, const AnisotropyPotential& pot,
                    const CoeffsH& m, const CoeffsH& u, const CoeffsH& v) {
    const double aniso = hessian_aniso_part(sb, pot, m, u, v);
    const double exch = exchange_pairing(sb, u, v);
    const CoeffsY pu = project_box_to_Y(sb, synthesize_H(sb.mag, u));
    const CoeffsY pv = project_box_to_Y(sb, synthesize_H(sb.mag, v));
    return aniso + exch + dot(pu, pv);
}

double hessian_form_V(const SpectralBases& sb, const AnisotropyPotential& pot,
                      const CoeffsH& m, const CoeffsH& u, const CoeffsH& v) {
    return hessian_aniso_part(sb, pot, m, u, v) + exchange_pairing(sb, u, v) + dot(u, v);
}

} // namespace spinwell
