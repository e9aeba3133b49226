// Noise family construction and the diffusion/correction operators. All the
// vector algebra happens pointwise on the quadrature grid; projections are
// applied exactly where the discrete system places them and nowhere else.
#include "spinwell/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smoothstep.hpp"
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

// f *= psi componentwise (psi is one scalar per node).
void mul_psi(GridField& f, const std::vector<double>& psi) {
    for (int k = 0; k < 3; ++k)
        kern::ops().mul(psi.data(), f.comp(k), f.comp(k), f.nodes());
}

void grid_axpy(GridField& y, double a, const GridField& x) {
    kern::ops().axpy(y.v.data(), a, x.v.data(), y.v.size());
}

} // namespace

double psi_radial(double r) {
    if (r <= 3.0)
        return 1.0;
    if (r >= 5.0)
        return 0.0;
    return 1.0 - detail::smooth_s((r - 3.0) / 2.0);
}

double psi_eval(const Vec3& x) { return psi_radial(norm(x)); }

Vec3 psi_grad(const Vec3& x) {
    const double r = norm(x);
    if (r <= 3.0 || r >= 5.0)
        return Vec3{0, 0, 0};
    const double dpsi = -detail::smooth_ds((r - 3.0) / 2.0) / 2.0;
    return (dpsi / r) * x;
}

void psi_values(const GridField& mgrid, std::vector<double>& out) {
    const std::size_t n = mgrid.nodes();
    out.resize(n);
    const double* mx = mgrid.comp(0);
    const double* my = mgrid.comp(1);
    const double* mz = mgrid.comp(2);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = psi_radial(std::sqrt(mx[i] * mx[i] + my[i] * my[i] + mz[i] * mz[i]));
}

NoiseFamily build_noise_family(const MagnetizationBasis& b, int J, double amp,
                               double decay, std::string_view profile) {
    if (J < 0)
        throw ConfigError("noise field count must be nonnegative, got " + std::to_string(J));
    if (amp < 0.0)
        throw ConfigError("noise amplitude must be nonnegative, got " + std::to_string(amp));
    const bool constant = profile == "constant";
    if (!constant && profile != "eigen")
        throw ConfigError("noise profile must be 'constant' or 'eigen', got '" +
                          std::string(profile) + "'");

    // Eigen profile walks the spectrum from the bottom, three Cartesian
    // directions per scalar mode.
    std::vector<int> order(b.eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
        return b.eigenvalues[p] < b.eigenvalues[q];
    });

    const double vol = b.lengths[0] * b.lengths[1] * b.lengths[2];
    NoiseFamily f;
    f.J = J;
    for (int j = 0; j < J; ++j) {
        const double a_j = amp * std::pow(j + 1.0, -decay);
        CoeffsH h = CoeffsH::zeros(b.modes);
        if (constant) {
            // Pointwise value a_j along the cycling direction; the constant
            // basis function carries 1/sqrt(|D|).
            h.comp(j % 3)[0] = a_j * std::sqrt(vol);
        } else {
            const std::size_t rank = static_cast<std::size_t>(j) / 3;
            if (rank >= order.size())
                throw ConfigError("eigen noise profile supports at most 3 * (scalar modes) "
                                  "fields, got J = " + std::to_string(J));
            h.comp(j % 3)[order[rank]] = a_j;
        }
        f.grids.push_back(synthesize_H(b, h));
        f.modes.push_back(std::move(h));
        f.amplitudes.push_back(a_j);
    }
    f.c_h2 = c_h_constant(b, f);
    return f;
}

double c_h_constant(const MagnetizationBasis& b, const NoiseFamily& f) {
    double sum = 0.0;
    for (int j = 0; j < f.J; ++j) {
        const GridField& g = f.grids[j];
        double sup = 0.0;
        const double* hx = g.comp(0);
        const double* hy = g.comp(1);
        const double* hz = g.comp(2);
        for (std::size_t i = 0; i < g.nodes(); ++i)
            sup = std::max(sup, hx[i] * hx[i] + hy[i] * hy[i] + hz[i] * hz[i]);
        sum += std::sqrt(sup) + v_norm2(b, f.modes[j]);
    }
    return sum;
}

void diffusion_G(const MagnetizationBasis& b, const NoiseFamily& f, int j,
                 const GridField& mgrid, const std::vector<double>& psi,
                 double l1, double l2, CoeffsH& out, NoiseWork& w) {
    if (j < 0 || j >= f.J)
        throw ConfigError("noise index out of range: " + std::to_string(j));
    const GridField& h = f.grids[j];
    grid_cross(mgrid, h, w.a);
    grid_cross(mgrid, w.a, w.bb);
    mul_psi(w.bb, psi);
    kern::ops().scale(w.a.v.data(), l1, w.a.v.size());
    grid_axpy(w.a, l2, w.bb);
    project_H(b, w.a, out);
}

CoeffsH diffusion_G(const MagnetizationBasis& b, const NoiseFamily& f, int j,
                    const CoeffsH& m, double l1, double l2) {
    NoiseWork w;
    GridField mg = synthesize_H(b, m);
    std::vector<double> psi;
    psi_values(mg, psi);
    CoeffsH out;
    diffusion_G(b, f, j, mg, psi, l1, l2, out, w);
    return out;
}

void ito_correction(const MagnetizationBasis& b, const NoiseFamily& f,
                    const GridField& mgrid, const std::vector<double>& psi,
                    double l1, double l2, CoeffsH& out, NoiseWork& w) {
    w.acc = GridField::zeros(Domain::Box, b.nodes);
    for (int j = 0; j < f.J; ++j) {
        const GridField& h = f.grids[j];
        grid_cross(mgrid, h, w.a);   // A = M x h
        grid_cross(mgrid, w.a, w.bb); // B = M x (M x h)

        // Inner projections: pi[M x h] and pi[psi M x (M x h)], back on the grid.
        project_H(b, w.a, w.htmp);
        synthesize_H(b, w.htmp, w.pa);
        w.t1 = w.bb;
        mul_psi(w.t1, psi);
        project_H(b, w.t1, w.htmp);
        synthesize_H(b, w.htmp, w.pb);

        // term 1: l1^2 pi[M x h] x h
        grid_cross(w.pa, h, w.t2);
        grid_axpy(w.acc, l1 * l1, w.t2);

        // terms 2 and 3 share B x h: psi (B x h) and psi M x (B x h)
        grid_cross(w.bb, h, w.t2);
        grid_cross(mgrid, w.t2, w.t1);
        mul_psi(w.t1, psi);
        grid_axpy(w.acc, l2 * l2, w.t1);
        mul_psi(w.t2, psi);
        grid_axpy(w.acc, l1 * l2, w.t2);

        // term 4: l1 l2 psi M x ((M x h) x h)
        grid_cross(w.a, h, w.t2);
        grid_cross(mgrid, w.t2, w.t1);
        mul_psi(w.t1, psi);
        grid_axpy(w.acc, l1 * l2, w.t1);

        // term 5: l2^2 pi[psi M x (M x h)] x (M x h)
        grid_cross(w.pb, w.a, w.t2);
        grid_axpy(w.acc, l2 * l2, w.t2);
    }
    project_H(b, w.acc, out);
    kern::ops().scale(out.c.data(), 0.5, out.c.size());
}

CoeffsH ito_correction(const MagnetizationBasis& b, const NoiseFamily& f,
                       const CoeffsH& m, double l1, double l2) {
    NoiseWork w;
    GridField mg = synthesize_H(b, m);
    std::vector<double> psi;
    psi_values(mg, psi);
    CoeffsH out;
    ito_correction(b, f, mg, psi, l1, l2, out, w);
    return out;
}

void diffusion_G_psi(const NoiseFamily& f, int j, const GridField& mgrid,
                     const std::vector<double>& psi, double l1, double l2,
                     GridField& out, NoiseWork& w) {
    if (j < 0 || j >= f.J)
        throw ConfigError("noise index out of range: " + std::to_string(j));
    const GridField& h = f.grids[j];
    grid_cross(mgrid, h, w.a);
    grid_cross(mgrid, w.a, w.bb);
    mul_psi(w.bb, psi);
    out = w.a;
    kern::ops().scale(out.v.data(), l1, out.v.size());
    grid_axpy(out, l2, w.bb);
}

void ito_correction_unprojected(const NoiseFamily& f, const GridField& mgrid,
                                const std::vector<double>& psi, double l1, double l2,
                                GridField& out, NoiseWork& w) {
    out = GridField::zeros(mgrid.dom, mgrid.n);
    for (int j = 0; j < f.J; ++j) {
        const GridField& h = f.grids[j];
        grid_cross(mgrid, h, w.a);
        grid_cross(mgrid, w.a, w.bb);

        // Same five terms as the projected correction with every pi removed.
        grid_cross(w.a, h, w.t2);
        grid_axpy(out, l1 * l1, w.t2);
        grid_cross(mgrid, w.t2, w.t1);
        mul_psi(w.t1, psi);
        grid_axpy(out, l1 * l2, w.t1);

        grid_cross(w.bb, h, w.t2);
        grid_cross(mgrid, w.t2, w.t1);
        mul_psi(w.t1, psi);
        grid_axpy(out, l2 * l2, w.t1);
        mul_psi(w.t2, psi);
        grid_axpy(out, l1 * l2, w.t2);

        w.t1 = w.bb;
        mul_psi(w.t1, psi);
        grid_cross(w.t1, w.a, w.t2);
        grid_axpy(out, l2 * l2, w.t2);
    }
    kern::ops().scale(out.v.data(), 0.5, out.v.size());
}

} // namespace spinwell
