// Identity residuals, ensemble estimators, and the independent oracles the
// tests pin their reference values against.
#include "spinwell/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinwell/kernels.hpp"

namespace spinwell {
namespace {

constexpr double kTiny = 1e-300;

void nodal_cross(const GridField& a, const GridField& b, GridField& out) {
    out.dom = a.dom;
    out.n = a.n;
    out.v.resize(a.v.size());
    kern::ops().cross(a.comp(0), a.comp(1), a.comp(2), b.comp(0), b.comp(1), b.comp(2),
                      out.comp(0), out.comp(1), out.comp(2), a.nodes());
}

} // namespace

NormIdentityCheck check_norm_identity(Dynamics& dyn, const GalerkinState& s) {
    StateDerivative d;
    std::vector<CoeffsH> gs;
    full_drift(dyn, s, true, d, dyn.noise.J > 0 ? &gs : nullptr, nullptr);
    double acc = 2.0 * dot(s.m, d.dm);
    for (const CoeffsH& g : gs)
        acc += h_norm2(g);
    NormIdentityCheck r;
    r.resid = std::fabs(acc);
    r.relative = r.resid / std::max(h_norm2(s.m), kTiny);
    return r;
}

EnergyIdentityCheck check_energy_identity(const Trajectory& tr) {
    EnergyIdentityCheck r;
    double sum = 0.0;
    for (double d : tr.step_energy_defect) {
        sum += d;
        r.max_step = std::max(r.max_step, std::fabs(d));
    }
    r.accumulated = std::fabs(sum);
    return r;
}

double check_div_B(const Trajectory& tr) { return tr.max_divb_drift; }

SphereCheck check_sphere_constraint(const MagnetizationBasis& mb, const CoeffsH& m) {
    const GridField g = synthesize_H(mb, m);
    const double* x = g.comp(0);
    const double* y = g.comp(1);
    const double* z = g.comp(2);
    SphereCheck r;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double dev =
            std::fabs(std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]) - 1.0);
        r.max_dev = std::max(r.max_dev, dev);
        acc += dev * dev;
    }
    r.l2_dev = std::sqrt(mb.weight * acc);
    return r;
}

double check_cross_identity(const MagnetizationBasis& mb, const CoeffsH& u,
                            const CoeffsH& v) {
    // A = -Laplacian: coefficients scale by +lambda_k.
    CoeffsH au = u;
    for (int k = 0; k < 3; ++k) {
        double* p = au.comp(k);
        for (int s = 0; s < mb.n_scalar; ++s)
            p[s] *= mb.eigenvalues[s];
    }
    const GridField ug = synthesize_H(mb, u);
    const GridField aug = synthesize_H(mb, au);
    const GridField vg = synthesize_H(mb, v);
    GridField uxau;
    nodal_cross(ug, aug, uxau);
    const double lhs = inner_product(mb, uxau, vg);

    double rhs = 0.0;
    GridField du, dv, dvxu;
    for (int axis = 0; axis < 3; ++axis) {
        gradient_H(mb, u, axis, du);
        gradient_H(mb, v, axis, dv);
        nodal_cross(dv, ug, dvxu);
        rhs += inner_product(mb, du, dvxu);
    }
    return std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), kTiny});
}

IdentitySweep identity_sweep(Dynamics& dyn, const GalerkinState& s) {
    IdentitySweep r;

    StateDerivative d;
    std::vector<CoeffsH> gs;
    full_drift(dyn, s, true, d, dyn.noise.J > 0 ? &gs : nullptr, nullptr);
    const double m2 = h_norm2(s.m);
    double acc = 2.0 * dot(s.m, d.dm);
    for (const CoeffsH& g : gs) {
        acc += h_norm2(g);
        const double denom = std::sqrt(std::max(m2 * h_norm2(g), kTiny));
        r.mg_orth = std::max(r.mg_orth, std::fabs(dot(s.m, g)) / denom);
    }
    r.norm_resid = std::fabs(acc) / std::max(m2, kTiny);

    EnergyWork ew;
    CoeffsH rho;
    effective_field(*dyn.sb, dyn.pot, s.m, s.b, dyn.em_coupling, rho, ew);
    const GridField rho_grid = synthesize_H(dyn.sb->mag, rho);
    GridField mxr, mmxr;
    nodal_cross(ew.mgrid, rho_grid, mxr);
    const CoeffsH pmxr = project_H(dyn.sb->mag, mxr);
    const double rho2 = h_norm2(rho);
    r.rho_precession = std::fabs(dot(rho, pmxr)) /
                       std::sqrt(std::max(rho2 * h_norm2(pmxr), kTiny));
    nodal_cross(ew.mgrid, mxr, mmxr);
    const CoeffsH pmmxr = project_H(dyn.sb->mag, mmxr);
    const double q_mxr = inner_product(dyn.sb->mag, mxr, mxr);
    r.rho_damping = std::fabs(dot(rho, pmmxr) + q_mxr) / std::max(q_mxr, kTiny);

    const CoeffsY pm = project_box_to_Y(*dyn.sb, ew.mgrid);
    CoeffsY ydiff = s.b;
    kern::ops().axpy(ydiff.c.data(), -1.0, pm.c.data(), ydiff.c.size());
    const CoeffsY curl_e = apply_curl(dyn.sb->em, s.e);
    const CoeffsY curl_yd = apply_curl(dyn.sb->em, ydiff);
    const double p1 = dot(ydiff, curl_e);
    const double p2 = dot(s.e, curl_yd);
    r.curl_pairing =
        std::fabs(p1 - p2) / std::max({std::fabs(p1), std::fabs(p2), kTiny});
    return r;
}

std::vector<MomentReport> moment_estimates(const EnsembleStats& st) {
    auto one = [](const char* name, const Moment& m) {
        MomentReport r;
        r.name = name;
        r.mean = m.mean;
        r.se = m.se;
        r.mean_sq = m.mean_sq;
        r.se_sq = m.se_sq;
        r.jensen_gap = m.mean_sq - m.mean * m.mean;
        return r;
    };
    return {one("sup_v_norm2", st.sup_v_norm2), one("sup_zeeman2", st.sup_zeeman2),
            one("sup_electric2", st.sup_electric2), one("int_mxrho2", st.int_mxrho2)};
}

double holder_estimate(Dynamics& dyn, const GalerkinState& init,
                       const BrownianPath& path, Scheme scheme) {
    GalerkinState s = init;
    StepWork w;
    std::vector<std::vector<double>> hist;
    hist.reserve(static_cast<std::size_t>(path.steps) + 1);
    hist.push_back(s.m.c);
    for (long k = 0; k < path.steps; ++k) {
        const double* dw = path.J > 0 ? path.row(k) : nullptr;
        if (scheme == Scheme::Heun)
            step_heun(dyn, s, path.dt, dw, w);
        else
            step_em_ito(dyn, s, path.dt, dw, w);
        hist.push_back(s.m.c);
    }

    std::vector<double> lx, ly;
    for (long lag = 1; 2 * lag <= path.steps; lag *= 2) {
        double acc = 0.0;
        long cnt = 0;
        for (long t = 0; t + lag <= path.steps; ++t) {
            const std::vector<double>& a = hist[static_cast<std::size_t>(t)];
            const std::vector<double>& b = hist[static_cast<std::size_t>(t + lag)];
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = b[i] - a[i];
                d2 += d * d; // basis is orthonormal, so this is ||.||_H^2
            }
            acc += d2;
            ++cnt;
        }
        const double rms = std::sqrt(acc / cnt);
        if (rms > 1e-14) {
            lx.push_back(std::log(lag * path.dt));
            ly.push_back(std::log(rms));
        }
    }
    if (lx.size() < 2)
        return std::numeric_limits<double>::infinity();

    const std::size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double oracle_fd_energy_gradient(const SpectralBases& sb, const AnisotropyPotential& pot,
                                 const GalerkinState& s, const CoeffsH& dir, double eps) {
    CoeffsH mp = s.m;
    CoeffsH mm = s.m;
    for (std::size_t i = 0; i < mp.c.size(); ++i) {
        mp.c[i] += eps * dir.c[i];
        mm.c[i] -= eps * dir.c[i];
    }
    const double ep = total_energy(sb, pot, mp, s.b, s.e).total;
    const double em = total_energy(sb, pot, mm, s.b, s.e).total;
    return (ep - em) / (2.0 * eps);
}

double oracle_fd_energy_hessian(const SpectralBases& sb, const AnisotropyPotential& pot,
                                const GalerkinState& s, const CoeffsH& u,
                                const CoeffsH& v, double eps) {
    auto shifted = [&](double a, double b) {
        CoeffsH m = s.m;
        for (std::size_t i = 0; i < m.c.size(); ++i)
            m.c[i] += a * u.c[i] + b * v.c[i];
        return total_energy(sb, pot, m, s.b, s.e).total;
    };
    return (shifted(eps, eps) - shifted(eps, -eps) - shifted(-eps, eps) +
            shifted(-eps, -eps)) /
           (4.0 * eps * eps);
}

void oracle_fd_correction(const NoiseFamily& nf, const GridField& mgrid, double l1,
                          double l2, double eps, GridField& out) {
    out = GridField::zeros(mgrid.dom, mgrid.n);
    NoiseWork w;
    GridField g0, gp, gm, mp, mm;
    std::vector<double> psi0, psis;
    psi_values(mgrid, psi0);
    for (int j = 0; j < nf.J; ++j) {
        diffusion_G_psi(nf, j, mgrid, psi0, l1, l2, g0, w);
        mp = mgrid;
        mm = mgrid;
        for (std::size_t i = 0; i < mgrid.v.size(); ++i) {
            mp.v[i] += eps * g0.v[i];
            mm.v[i] -= eps * g0.v[i];
        }
        psi_values(mp, psis);
        diffusion_G_psi(nf, j, mp, psis, l1, l2, gp, w);
        psi_values(mm, psis);
        diffusion_G_psi(nf, j, mm, psis, l1, l2, gm, w);
        for (std::size_t i = 0; i < out.v.size(); ++i)
            out.v[i] += (gp.v[i] - gm.v[i]) / (4.0 * eps);
    }
}

std::vector<double> oracle_dense_projection(
    const MagnetizationBasis& mb,
    const std::function<void(double, double, double, double*)>& fn) {
    const long double pi = acosl(-1.0L);
    std::array<int, 3> nn{};
    std::array<std::vector<long double>, 3> tab;   // [mode * nn + node]
    std::array<std::vector<long double>, 3> coord; // node positions
    long double wq = 1.0L;
    for (int a = 0; a < 3; ++a) {
        nn[a] = 2 * mb.nodes[a] + 1;
        const long double L = mb.lengths[a];
        wq *= L / nn[a];
        coord[a].resize(nn[a]);
        tab[a].assign(static_cast<std::size_t>(mb.modes[a]) * nn[a], 0.0L);
        for (int i = 0; i < nn[a]; ++i) {
            const long double x = (i + 0.5L) * L / nn[a];
            coord[a][i] = x;
            for (int k = 0; k < mb.modes[a]; ++k)
                tab[a][static_cast<std::size_t>(k) * nn[a] + i] =
                    k == 0 ? sqrtl(1.0L / L) : sqrtl(2.0L / L) * cosl(pi * k * x / L);
        }
    }

    const int ns = mb.n_scalar;
    std::vector<long double> acc(static_cast<std::size_t>(3) * ns, 0.0L);
    double val[3];
    for (int i = 0; i < nn[0]; ++i)
        for (int j = 0; j < nn[1]; ++j)
            for (int l = 0; l < nn[2]; ++l) {
                fn(static_cast<double>(coord[0][i]), static_cast<double>(coord[1][j]),
                   static_cast<double>(coord[2][l]), val);
                for (int c = 0; c < 3; ++c) {
                    long double* dst = acc.data() + static_cast<std::size_t>(c) * ns;
                    for (int k0 = 0; k0 < mb.modes[0]; ++k0) {
                        const long double t0 =
                            val[c] * tab[0][static_cast<std::size_t>(k0) * nn[0] + i];
                        for (int k1 = 0; k1 < mb.modes[1]; ++k1) {
                            const long double t1 =
                                t0 * tab[1][static_cast<std::size_t>(k1) * nn[1] + j];
                            long double* row =
                                dst + static_cast<std::size_t>(mb.scalar_index(k0, k1, 0));
                            for (int k2 = 0; k2 < mb.modes[2]; ++k2)
                                row[k2] +=
                                    t1 * tab[2][static_cast<std::size_t>(k2) * nn[2] + l];
                        }
                    }
                }
            }

    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        out[i] = static_cast<double>(acc[i] * wq);
    return out;
}

Vec3 oracle_reduced_llg(Vec3 m0, const Vec3& axis, double K, double l1, double l2,
                        double T, double dt_ref) {
    const long n = std::max(1L, std::lround(T / dt_ref));
    const double h = T / n;
    auto f = [&](const Vec3& m) {
        const Vec3 r = (2.0 * K * dot(m, axis)) * axis;
        const Vec3 mr = cross(m, r);
        return l1 * mr - l2 * cross(m, mr);
    };
    Vec3 m = m0;
    for (long k = 0; k < n; ++k) {
        const Vec3 k1 = f(m);
        const Vec3 k2 = f(m + (0.5 * h) * k1);
        const Vec3 k3 = f(m + (0.5 * h) * k2);
        const Vec3 k4 = f(m + h * k3);
        m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return m;
}

CoeffsH random_coeffs_H(const MagnetizationBasis& mb, std::mt19937_64& eng,
                        double target_max) {
    CoeffsH c = CoeffsH::zeros(mb.modes);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 3; ++k) {
        double* p = c.comp(k);
        for (int s = 0; s < mb.n_scalar; ++s)
            p[s] = nd(eng) / (1.0 + mb.eigenvalues[s]);
    }
    const GridField g = synthesize_H(mb, c);
    const double* x = g.comp(0);
    const double* y = g.comp(1);
    const double* z = g.comp(2);
    double mx2 = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i)
        mx2 = std::max(mx2, x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
    if (mx2 > 0.0)
        kern::ops().scale(c.c.data(), target_max / std::sqrt(mx2), c.c.size());
    return c;
}

GalerkinState random_state(const SpectralBases& sb, std::mt19937_64& eng,
                           double target_max) {
    GalerkinState s;
    s.m = random_coeffs_H(sb.mag, eng, target_max);
    std::normal_distribution<double> nd;
    auto fill_y = [&](CoeffsY& c) {
        c = CoeffsY::zeros(sb.em.bands);
        for (int k = 0; k < 3; ++k) {
            double* p = c.comp(k);
            for (int t0 = 0; t0 < sb.em.nfact[0]; ++t0)
                for (int t1 = 0; t1 < sb.em.nfact[1]; ++t1)
                    for (int t2 = 0; t2 < sb.em.nfact[2]; ++t2) {
                        const int f0 = (t0 + 1) / 2;
                        const int f1 = (t1 + 1) / 2;
                        const int f2 = (t2 + 1) / 2;
                        p[sb.em.scalar_index(t0, t1, t2)] =
                            nd(eng) / (1.0 + f0 * f0 + f1 * f1 + f2 * f2);
                    }
        }
        const double n2 = l2_norm2(c);
        if (n2 > 0.0)
            kern::ops().scale(c.c.data(), 1.0 / std::sqrt(n2), c.c.size());
    };
    fill_y(s.b);
    fill_y(s.e);
    return s;
}

} // namespace spinwell
