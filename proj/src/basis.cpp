// Spectral basis construction and the separable tensor transforms. Every
// transform is three per-axis contractions routed through the kernel matmul;
// the per-axis tables are built once at basis construction.
#include "spinwell/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinwell/errors.hpp"
#include "spinwell/kernels.hpp"

namespace spinwell {
namespace {

constexpr double kPi = std::numbers::pi;

void check_positive_lengths(const std::array<double, 3>& lengths) {
    for (double l : lengths)
        if (!(l > 0.0))
            throw ConfigError("domain lengths must be positive, got " + std::to_string(l));
}

// --- tensor contraction plumbing -----------------------------------------

// out[newd x d12] = M[newd x d0] * in[d0 x d12]
void apply_axis0(const double* in, int d0, int d12, const double* M, int newd, double* out) {
    kern::ops().matmul(M, in, out, newd, d0, d12);
}

// out[d0][newd][d2] from in[d0][d1][d2], M[newd x d1]
void apply_axis1(const double* in, int d0, int d1, int d2, const double* M, int newd, double* out) {
    const std::size_t in_slab = static_cast<std::size_t>(d1) * d2;
    const std::size_t out_slab = static_cast<std::size_t>(newd) * d2;
    for (int i = 0; i < d0; ++i)
        kern::ops().matmul(M, in + i * in_slab, out + i * out_slab, newd, d1, d2);
}

// out[d01 x newd] = in[d01 x d2] * Mt[d2 x newd]
void apply_axis2(const double* in, int d01, int d2, const double* Mt, int newd, double* out) {
    kern::ops().matmul(in, Mt, out, d01, d2, newd);
}

std::vector<double>& scratch(int which) {
    thread_local std::vector<double> bufs[2];
    return bufs[which];
}

// One scalar component through all three axes. A0, A1 are the left-form
// [new x old] tables for axes 0 and 1; A2t is the right-form [old x new]
// table for axis 2.
void tensor_transform(const double* in, const std::array<int, 3>& din,
                      const double* A0, int o0, const double* A1, int o1,
                      const double* A2t, int o2, double* out) {
    std::vector<double>& s1 = scratch(0);
    std::vector<double>& s2 = scratch(1);
    s1.resize(static_cast<std::size_t>(din[0]) * din[1] * o2);
    apply_axis2(in, din[0] * din[1], din[2], A2t, o2, s1.data());
    s2.resize(static_cast<std::size_t>(din[0]) * o1 * o2);
    apply_axis1(s1.data(), din[0], din[1], o2, A1, o1, s2.data());
    apply_axis0(s2.data(), din[0], o1 * o2, A0, o0, out);
}

// --- table builders -------------------------------------------------------

void fill_transposes(AxisTables& t, double w) {
    const int n = t.nmodes, N = t.nnodes;
    t.synthT.resize(static_cast<std::size_t>(N) * n);
    t.wsynth.resize(t.synth.size());
    t.wsynthT.resize(t.synthT.size());
    t.dsynthT.resize(static_cast<std::size_t>(N) * n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < N; ++j) {
            const double v = t.synth[static_cast<std::size_t>(k) * N + j];
            t.synthT[static_cast<std::size_t>(j) * n + k] = v;
            t.wsynth[static_cast<std::size_t>(k) * N + j] = w * v;
            t.wsynthT[static_cast<std::size_t>(j) * n + k] = w * v;
            t.dsynthT[static_cast<std::size_t>(j) * n + k] =
                t.dsynth[static_cast<std::size_t>(k) * N + j];
        }
}

AxisTables make_cosine_axis(int n, int N, double L) {
    AxisTables t;
    t.nmodes = n;
    t.nnodes = N;
    t.synth.resize(static_cast<std::size_t>(n) * N);
    t.dsynth.resize(static_cast<std::size_t>(n) * N, 0.0);
    const double amp0 = std::sqrt(1.0 / L);
    const double amp = std::sqrt(2.0 / L);
    for (int k = 0; k < n; ++k) {
        const double freq = kPi * k / L;
        for (int j = 0; j < N; ++j) {
            const double x = (j + 0.5) * L / N;
            const std::size_t idx = static_cast<std::size_t>(k) * N + j;
            if (k == 0) {
                t.synth[idx] = amp0;
                t.dsynth[idx] = 0.0;
            } else {
                t.synth[idx] = amp * std::cos(freq * x);
                t.dsynth[idx] = -amp * freq * std::sin(freq * x);
            }
        }
    }
    fill_transposes(t, L / N);
    return t;
}

void fill_em_transposes(EMAxisTables& t, double w) {
    const int n = t.nfact, N = t.nnodes;
    t.synthT.resize(static_cast<std::size_t>(N) * n);
    t.wsynth.resize(t.synth.size());
    t.wsynthT.resize(t.synthT.size());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < N; ++j) {
            const double v = t.synth[static_cast<std::size_t>(k) * N + j];
            t.synthT[static_cast<std::size_t>(j) * n + k] = v;
            t.wsynth[static_cast<std::size_t>(k) * N + j] = w * v;
            t.wsynthT[static_cast<std::size_t>(j) * n + k] = w * v;
        }
}

// Torus factor values at given coordinates. Factor order per axis: constant,
// then (cos, sin) per frequency 1..m-1.
EMAxisTables make_trig_axis(int m, double LT, const std::vector<double>& coords, double w) {
    EMAxisTables t;
    t.nfact = 2 * m - 1;
    t.nnodes = static_cast<int>(coords.size());
    const int nf = t.nfact, N = t.nnodes;
    t.synth.resize(static_cast<std::size_t>(nf) * N);
    const double amp0 = std::sqrt(1.0 / LT);
    const double amp = std::sqrt(2.0 / LT);
    for (int j = 0; j < N; ++j)
        t.synth[j] = amp0;
    for (int k = 1; k < m; ++k) {
        const double freq = 2.0 * kPi * k / LT;
        for (int j = 0; j < N; ++j) {
            t.synth[static_cast<std::size_t>(2 * k - 1) * N + j] = amp * std::cos(freq * coords[j]);
            t.synth[static_cast<std::size_t>(2 * k) * N + j] = amp * std::sin(freq * coords[j]);
        }
    }
    // Coefficient-space derivative: d/dx cos_k = -freq sin_k, d/dx sin_k = freq cos_k.
    t.dmat.assign(static_cast<std::size_t>(nf) * nf, 0.0);
    t.dmatT.assign(static_cast<std::size_t>(nf) * nf, 0.0);
    for (int k = 1; k < m; ++k) {
        const double freq = 2.0 * kPi * k / LT;
        t.dmat[static_cast<std::size_t>(2 * k) * nf + (2 * k - 1)] = -freq;
        t.dmat[static_cast<std::size_t>(2 * k - 1) * nf + (2 * k)] = freq;
        t.dmatT[static_cast<std::size_t>(2 * k - 1) * nf + (2 * k)] = -freq;
        t.dmatT[static_cast<std::size_t>(2 * k) * nf + (2 * k - 1)] = freq;
    }
    fill_em_transposes(t, w);
    return t;
}

} // namespace

// --- types ----------------------------------------------------------------

GridField GridField::zeros(Domain dom, const std::array<int, 3>& n) {
    GridField f;
    f.dom = dom;
    f.n = n;
    f.v.assign(3 * f.nodes(), 0.0);
    return f;
}

CoeffsH CoeffsH::zeros(const std::array<int, 3>& modes) {
    CoeffsH c;
    c.modes = modes;
    c.c.assign(static_cast<std::size_t>(3) * modes[0] * modes[1] * modes[2], 0.0);
    return c;
}

CoeffsY CoeffsY::zeros(const std::array<int, 3>& bands) {
    CoeffsY c;
    c.bands = bands;
    for (int i = 0; i < 3; ++i)
        c.nfact[i] = 2 * bands[i] - 1;
    c.c.assign(static_cast<std::size_t>(3) * c.nfact[0] * c.nfact[1] * c.nfact[2], 0.0);
    return c;
}

// --- builders -------------------------------------------------------------

MagnetizationBasis build_magnetization_basis(const std::array<int, 3>& modes,
                                             const std::array<double, 3>& lengths,
                                             std::array<int, 3> quad_nodes) {
    check_positive_lengths(lengths);
    for (int i = 0; i < 3; ++i) {
        if (modes[i] < 1)
            throw ConfigError("modes per axis must be at least 1, got " +
                              std::to_string(modes[i]));
        const int required = 4 * modes[i] + 1;
        if (quad_nodes[i] == 0)
            quad_nodes[i] = required;
        if (quad_nodes[i] < required)
            throw ConfigError("quadrature nodes per axis must be at least 4*modes+1 = " +
                              std::to_string(required) + ", got " +
                              std::to_string(quad_nodes[i]));
        if (quad_nodes[i] % 2 == 0)
            throw ConfigError("quadrature nodes per axis must be odd so the box grid "
                              "aligns inside the torus grid, got " +
                              std::to_string(quad_nodes[i]));
    }

    MagnetizationBasis b;
    b.modes = modes;
    b.nodes = quad_nodes;
    b.lengths = lengths;
    b.n_scalar = modes[0] * modes[1] * modes[2];
    b.n_nodes = static_cast<std::size_t>(quad_nodes[0]) * quad_nodes[1] * quad_nodes[2];
    b.weight = (lengths[0] / quad_nodes[0]) * (lengths[1] / quad_nodes[1]) *
               (lengths[2] / quad_nodes[2]);
    for (int i = 0; i < 3; ++i)
        b.axes[i] = make_cosine_axis(modes[i], quad_nodes[i], lengths[i]);

    b.eigenvalues.resize(b.n_scalar);
    for (int k0 = 0; k0 < modes[0]; ++k0)
        for (int k1 = 0; k1 < modes[1]; ++k1)
            for (int k2 = 0; k2 < modes[2]; ++k2) {
                const double f0 = kPi * k0 / lengths[0];
                const double f1 = kPi * k1 / lengths[1];
                const double f2 = kPi * k2 / lengths[2];
                b.eigenvalues[b.scalar_index(k0, k1, k2)] = f0 * f0 + f1 * f1 + f2 * f2;
            }
    return b;
}

EMBasis build_em_basis(const std::array<int, 3>& bands,
                       const std::array<double, 3>& lengths,
                       std::array<int, 3> nodes) {
    check_positive_lengths(lengths);
    EMBasis b;
    for (int i = 0; i < 3; ++i) {
        if (bands[i] < 1)
            throw ConfigError("torus bands per axis must be at least 1, got " +
                              std::to_string(bands[i]));
        if (nodes[i] == 0)
            nodes[i] = 4 * bands[i] + 2;
        if (nodes[i] < 4 * bands[i] - 3)
            throw ConfigError("torus grid nodes per axis must be at least 4*bands-3 = " +
                              std::to_string(4 * bands[i] - 3) + ", got " +
                              std::to_string(nodes[i]));
    }
    b.bands = bands;
    b.nodes = nodes;
    b.lengths = lengths;
    for (int i = 0; i < 3; ++i)
        b.nfact[i] = 2 * bands[i] - 1;
    b.n_scalar = b.nfact[0] * b.nfact[1] * b.nfact[2];
    b.n_nodes = static_cast<std::size_t>(nodes[0]) * nodes[1] * nodes[2];
    b.weight = (lengths[0] / nodes[0]) * (lengths[1] / nodes[1]) * (lengths[2] / nodes[2]);
    for (int i = 0; i < 3; ++i) {
        std::vector<double> coords(nodes[i]);
        for (int j = 0; j < nodes[i]; ++j)
            coords[j] = j * lengths[i] / nodes[i];
        b.axes[i] = make_trig_axis(bands[i], lengths[i], coords, lengths[i] / nodes[i]);
    }
    return b;
}

SpectralBases build_spectral_bases(const std::array<int, 3>& mag_modes,
                                   const std::array<double, 3>& box_lengths,
                                   const std::array<int, 3>& em_bands,
                                   std::array<int, 3> quad_nodes,
                                   std::array<int, 3> torus_ratio) {
    SpectralBases sb;
    sb.mag = build_magnetization_basis(mag_modes, box_lengths, quad_nodes);
    sb.ratio = torus_ratio;

    std::array<double, 3> torus_lengths;
    std::array<int, 3> torus_nodes;
    for (int i = 0; i < 3; ++i) {
        const int r = torus_ratio[i];
        if (r < 2 || r % 2 != 0)
            throw ConfigError("torus to box length ratio must be an even integer >= 2 "
                              "per axis, got " + std::to_string(r));
        torus_lengths[i] = r * box_lengths[i];
        torus_nodes[i] = r * sb.mag.nodes[i];
        // Center the box: offset lands exactly half a grid spacing past a
        // torus node because (r-1) * N_box is odd.
        sb.offset[i] = 0.5 * (torus_lengths[i] - box_lengths[i]);
        sb.node_offset[i] = ((r - 1) * sb.mag.nodes[i] + 1) / 2;
    }
    sb.em = build_em_basis(em_bands, torus_lengths, torus_nodes);

    for (int i = 0; i < 3; ++i) {
        const int N = sb.mag.nodes[i];
        std::vector<double> coords(N);
        for (int j = 0; j < N; ++j)
            coords[j] = sb.offset[i] + (j + 0.5) * box_lengths[i] / N;
        sb.em_at_box[i] = make_trig_axis(em_bands[i], torus_lengths[i], coords,
                                         torus_lengths[i] / sb.em.nodes[i]);
    }
    return sb;
}

// --- transforms -----------------------------------------------------------

void synthesize_H(const MagnetizationBasis& b, const CoeffsH& c, GridField& out) {
    out.dom = Domain::Box;
    out.n = b.nodes;
    out.v.resize(3 * b.n_nodes);
    for (int k = 0; k < 3; ++k)
        tensor_transform(c.comp(k), b.modes, b.axes[0].synthT.data(), b.nodes[0],
                         b.axes[1].synthT.data(), b.nodes[1], b.axes[2].synth.data(),
                         b.nodes[2], out.comp(k));
}

GridField synthesize_H(const MagnetizationBasis& b, const CoeffsH& c) {
    GridField f;
    synthesize_H(b, c, f);
    return f;
}

void project_H(const MagnetizationBasis& b, const GridField& f, CoeffsH& out) {
    out.modes = b.modes;
    out.c.resize(static_cast<std::size_t>(3) * b.n_scalar);
    for (int k = 0; k < 3; ++k)
        tensor_transform(f.comp(k), b.nodes, b.axes[0].wsynth.data(), b.modes[0],
                         b.axes[1].wsynth.data(), b.modes[1], b.axes[2].wsynthT.data(),
                         b.modes[2], out.comp(k));
}

CoeffsH project_H(const MagnetizationBasis& b, const GridField& f) {
    CoeffsH c;
    project_H(b, f, c);
    return c;
}

void gradient_H(const MagnetizationBasis& b, const CoeffsH& c, int axis, GridField& out) {
    out.dom = Domain::Box;
    out.n = b.nodes;
    out.v.resize(3 * b.n_nodes);
    const double* A0 = axis == 0 ? b.axes[0].dsynthT.data() : b.axes[0].synthT.data();
    const double* A1 = axis == 1 ? b.axes[1].dsynthT.data() : b.axes[1].synthT.data();
    const double* A2t = axis == 2 ? b.axes[2].dsynth.data() : b.axes[2].synth.data();
    for (int k = 0; k < 3; ++k)
        tensor_transform(c.comp(k), b.modes, A0, b.nodes[0], A1, b.nodes[1], A2t,
                         b.nodes[2], out.comp(k));
}

GridField gradient_H(const MagnetizationBasis& b, const CoeffsH& c, int axis) {
    GridField f;
    gradient_H(b, c, axis, f);
    return f;
}

void synthesize_Y(const EMBasis& b, const CoeffsY& c, GridField& out) {
    out.dom = Domain::Torus;
    out.n = b.nodes;
    out.v.resize(3 * b.n_nodes);
    for (int k = 0; k < 3; ++k)
        tensor_transform(c.comp(k), b.nfact, b.axes[0].synthT.data(), b.nodes[0],
                         b.axes[1].synthT.data(), b.nodes[1], b.axes[2].synth.data(),
                         b.nodes[2], out.comp(k));
}

GridField synthesize_Y(const EMBasis& b, const CoeffsY& c) {
    GridField f;
    synthesize_Y(b, c, f);
    return f;
}

void project_Y(const EMBasis& b, const GridField& f, CoeffsY& out) {
    out.bands = b.bands;
    out.nfact = b.nfact;
    out.c.resize(static_cast<std::size_t>(3) * b.n_scalar);
    for (int k = 0; k < 3; ++k)
        tensor_transform(f.comp(k), b.nodes, b.axes[0].wsynth.data(), b.nfact[0],
                         b.axes[1].wsynth.data(), b.nfact[1], b.axes[2].wsynthT.data(),
                         b.nfact[2], out.comp(k));
}

CoeffsY project_Y(const EMBasis& b, const GridField& f) {
    CoeffsY c;
    project_Y(b, f, c);
    return c;
}

void synthesize_Y_at_box(const SpectralBases& sb, const CoeffsY& c, GridField& out) {
    out.dom = Domain::Box;
    out.n = sb.mag.nodes;
    out.v.resize(3 * sb.mag.n_nodes);
    for (int k = 0; k < 3; ++k)
        tensor_transform(c.comp(k), sb.em.nfact, sb.em_at_box[0].synthT.data(),
                         sb.mag.nodes[0], sb.em_at_box[1].synthT.data(), sb.mag.nodes[1],
                         sb.em_at_box[2].synth.data(), sb.mag.nodes[2], out.comp(k));
}

GridField synthesize_Y_at_box(const SpectralBases& sb, const CoeffsY& c) {
    GridField f;
    synthesize_Y_at_box(sb, c, f);
    return f;
}

void project_box_to_Y(const SpectralBases& sb, const GridField& f, CoeffsY& out) {
    out.bands = sb.em.bands;
    out.nfact = sb.em.nfact;
    out.c.resize(static_cast<std::size_t>(3) * sb.em.n_scalar);
    for (int k = 0; k < 3; ++k)
        tensor_transform(f.comp(k), sb.mag.nodes, sb.em_at_box[0].wsynth.data(),
                         sb.em.nfact[0], sb.em_at_box[1].wsynth.data(), sb.em.nfact[1],
                         sb.em_at_box[2].wsynthT.data(), sb.em.nfact[2], out.comp(k));
}

CoeffsY project_box_to_Y(const SpectralBases& sb, const GridField& f) {
    CoeffsY c;
    project_box_to_Y(sb, f, c);
    return c;
}

// --- differential operators ----------------------------------------------

CoeffsH apply_laplacian(const MagnetizationBasis& b, const CoeffsH& c) {
    CoeffsH out = c;
    for (int k = 0; k < 3; ++k) {
        double* p = out.comp(k);
        for (int s = 0; s < b.n_scalar; ++s)
            p[s] *= -b.eigenvalues[s];
    }
    return out;
}

namespace {

// out_comp = d/dx_axis of in_comp, both scalar coefficient tensors on the
// torus band.
void em_deriv_axis(const EMBasis& b, const double* in, int axis, double* out) {
    const auto& d = b.nfact;
    switch (axis) {
    case 0:
        apply_axis0(in, d[0], d[1] * d[2], b.axes[0].dmat.data(), d[0], out);
        break;
    case 1:
        apply_axis1(in, d[0], d[1], d[2], b.axes[1].dmat.data(), d[1], out);
        break;
    default:
        apply_axis2(in, d[0] * d[1], d[2], b.axes[2].dmatT.data(), d[2], out);
        break;
    }
}

} // namespace

void apply_curl(const EMBasis& b, const CoeffsY& c, CoeffsY& out) {
    out.bands = b.bands;
    out.nfact = b.nfact;
    out.c.assign(static_cast<std::size_t>(3) * b.n_scalar, 0.0);
    std::vector<double>& tmp = scratch(0);
    tmp.resize(b.n_scalar);
    auto acc = [&](int out_comp, int axis, int in_comp, double sign) {
        em_deriv_axis(b, c.comp(in_comp), axis, tmp.data());
        kern::ops().axpy(out.comp(out_comp), sign, tmp.data(), b.n_scalar);
    };
    acc(0, 1, 2, 1.0);  // + d u_z / dy
    acc(0, 2, 1, -1.0); // - d u_y / dz
    acc(1, 2, 0, 1.0);  // + d u_x / dz
    acc(1, 0, 2, -1.0); // - d u_z / dx
    acc(2, 0, 1, 1.0);  // + d u_y / dx
    acc(2, 1, 0, -1.0); // - d u_x / dy
}

CoeffsY apply_curl(const EMBasis& b, const CoeffsY& c) {
    CoeffsY out;
    apply_curl(b, c, out);
    return out;
}

std::vector<double> divergence_coeffs(const EMBasis& b, const CoeffsY& c) {
    std::vector<double> out(b.n_scalar, 0.0);
    std::vector<double> tmp(b.n_scalar);
    for (int axis = 0; axis < 3; ++axis) {
        em_deriv_axis(b, c.comp(axis), axis, tmp.data());
        kern::ops().axpy(out.data(), 1.0, tmp.data(), b.n_scalar);
    }
    return out;
}

// --- extension / restriction ----------------------------------------------

GridField extend_by_zero(const SpectralBases& sb, const GridField& boxfield) {
    if (boxfield.dom != Domain::Box || boxfield.n != sb.mag.nodes)
        throw ConfigError("extend_by_zero expects a field on the box quadrature grid");
    GridField out = GridField::zeros(Domain::Torus, sb.em.nodes);
    const auto& nb = sb.mag.nodes;
    const auto& nt = sb.em.nodes;
    for (int comp = 0; comp < 3; ++comp) {
        const double* src = boxfield.comp(comp);
        double* dst = out.comp(comp);
        for (int j0 = 0; j0 < nb[0]; ++j0)
            for (int j1 = 0; j1 < nb[1]; ++j1)
                for (int j2 = 0; j2 < nb[2]; ++j2) {
                    const std::size_t bi =
                        (static_cast<std::size_t>(j0) * nb[1] + j1) * nb[2] + j2;
                    const std::size_t ti =
                        (static_cast<std::size_t>(j0 + sb.node_offset[0]) * nt[1] +
                         (j1 + sb.node_offset[1])) * nt[2] +
                        (j2 + sb.node_offset[2]);
                    dst[ti] = src[bi];
                }
    }
    return out;
}

GridField restrict_to_box(const SpectralBases& sb, const GridField& torusfield) {
    if (torusfield.dom != Domain::Torus || torusfield.n != sb.em.nodes)
        throw ConfigError("restrict_to_box expects a field on the torus grid");
    GridField out = GridField::zeros(Domain::Box, sb.mag.nodes);
    const auto& nb = sb.mag.nodes;
    const auto& nt = sb.em.nodes;
    for (int comp = 0; comp < 3; ++comp) {
        const double* src = torusfield.comp(comp);
        double* dst = out.comp(comp);
        for (int j0 = 0; j0 < nb[0]; ++j0)
            for (int j1 = 0; j1 < nb[1]; ++j1)
                for (int j2 = 0; j2 < nb[2]; ++j2) {
                    const std::size_t bi =
                        (static_cast<std::size_t>(j0) * nb[1] + j1) * nb[2] + j2;
                    const std::size_t ti =
                        (static_cast<std::size_t>(j0 + sb.node_offset[0]) * nt[1] +
                         (j1 + sb.node_offset[1])) * nt[2] +
                        (j2 + sb.node_offset[2]);
                    dst[bi] = src[ti];
                }
    }
    return out;
}

// --- inner products and norms ---------------------------------------------

namespace {

double grid_inner(const GridField& f, const GridField& g, double weight) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k)
        s += kern::ops().dot(f.comp(k), g.comp(k), f.nodes());
    return weight * s;
}

} // namespace

double inner_product(const MagnetizationBasis& b, const GridField& f, const GridField& g) {
    if (f.dom != Domain::Box || g.dom != Domain::Box || f.n != b.nodes || g.n != b.nodes)
        throw ConfigError("inner_product expects fields on the box quadrature grid");
    return grid_inner(f, g, b.weight);
}

double inner_product(const EMBasis& b, const GridField& f, const GridField& g) {
    if (f.dom != Domain::Torus || g.dom != Domain::Torus || f.n != b.nodes || g.n != b.nodes)
        throw ConfigError("inner_product expects fields on the torus grid");
    return grid_inner(f, g, b.weight);
}

double h_norm2(const CoeffsH& c) {
    return kern::ops().dot(c.c.data(), c.c.data(), c.c.size());
}

double v_norm2(const MagnetizationBasis& b, const CoeffsH& c) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double* p = c.comp(k);
        for (int i = 0; i < b.n_scalar; ++i)
            s += (1.0 + b.eigenvalues[i]) * p[i] * p[i];
    }
    return s;
}

double grad_norm2(const MagnetizationBasis& b, const CoeffsH& c) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double* p = c.comp(k);
        for (int i = 0; i < b.n_scalar; ++i)
            s += b.eigenvalues[i] * p[i] * p[i];
    }
    return s;
}

double l2_norm2(const CoeffsY& c) {
    return kern::ops().dot(c.c.data(), c.c.data(), c.c.size());
}

double dot(const CoeffsH& a, const CoeffsH& b) {
    return kern::ops().dot(a.c.data(), b.c.data(), a.c.size());
}

double dot(const CoeffsY& a, const CoeffsY& b) {
    return kern::ops().dot(a.c.data(), b.c.data(), a.c.size());
}

} // namespace spinwell
