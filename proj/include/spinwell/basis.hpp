// Spectral bases and transforms.
//
// Magnetization lives on the box D = prod [0, L_i] in the span of Neumann
// Laplacian eigenfunctions (tensor cosines), three vector copies per scalar
// mode. The electromagnetic fields live on an enclosing torus T = prod
// [0, ratio_i * L_i] in a real tensor trigonometric basis (per axis: constant,
// then cos/sin pairs), which keeps every partial derivative, and hence curl
// and divergence, an exact coefficient-space map within the band.
//
// Quadrature is uniform midpoint on D (the nodes of the cosine transform) and
// uniform periodic on T. The box node count per axis is odd and the torus
// ratio is an even integer, which makes every torus node strictly inside D
// coincide with a box node, with one shared weight; the zero-extension and
// restriction maps are then plain index gathers and the indicator of D is
// unambiguous on nodes.
//
// Layouts: scalar modes and grid nodes are row major over (axis0, axis1,
// axis2); vector quantities store three full component planes back to back.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace spinwell {

enum class Domain { Box, Torus };

struct GridField {
    Domain dom = Domain::Box;
    std::array<int, 3> n{0, 0, 0};
    std::vector<double> v; // [3][n0*n1*n2]

    static GridField zeros(Domain dom, const std::array<int, 3>& n);
    std::size_t nodes() const {
        return static_cast<std::size_t>(n[0]) * n[1] * n[2];
    }
    double* comp(int c) { return v.data() + static_cast<std::size_t>(c) * nodes(); }
    const double* comp(int c) const { return v.data() + static_cast<std::size_t>(c) * nodes(); }
};

// Coefficients of a vector field in the magnetization basis.
struct CoeffsH {
    std::array<int, 3> modes{0, 0, 0};
    std::vector<double> c; // [3][prod modes]

    static CoeffsH zeros(const std::array<int, 3>& modes);
    int n_scalar() const { return modes[0] * modes[1] * modes[2]; }
    double* comp(int k) { return c.data() + static_cast<std::size_t>(k) * n_scalar(); }
    const double* comp(int k) const { return c.data() + static_cast<std::size_t>(k) * n_scalar(); }
};

// Coefficients of a vector field in the torus basis. bands[i] counts
// frequencies 0..bands[i]-1 per axis; each axis contributes 2*bands[i]-1 real
// factors (constant plus cos/sin pairs).
struct CoeffsY {
    std::array<int, 3> bands{0, 0, 0};
    std::array<int, 3> nfact{0, 0, 0};
    std::vector<double> c; // [3][prod nfact]

    static CoeffsY zeros(const std::array<int, 3>& bands);
    int n_scalar() const { return nfact[0] * nfact[1] * nfact[2]; }
    double* comp(int k) { return c.data() + static_cast<std::size_t>(k) * n_scalar(); }
    const double* comp(int k) const { return c.data() + static_cast<std::size_t>(k) * n_scalar(); }
};

// Per-axis tables for the cosine basis: basis values and x-derivative values
// at the quadrature nodes, plain and transposed, with and without the
// quadrature weight folded in.
struct AxisTables {
    int nmodes = 0;
    int nnodes = 0;
    std::vector<double> synth;   // [nmodes x nnodes]
    std::vector<double> synthT;  // [nnodes x nmodes]
    std::vector<double> wsynth;  // weight * synth
    std::vector<double> wsynthT; // weight * synthT
    std::vector<double> dsynth;  // derivative values, [nmodes x nnodes]
    std::vector<double> dsynthT; // [nnodes x nmodes]
};

struct MagnetizationBasis {
    std::array<int, 3> modes{0, 0, 0};
    std::array<int, 3> nodes{0, 0, 0};
    std::array<double, 3> lengths{0, 0, 0};
    int n_scalar = 0;
    std::size_t n_nodes = 0;
    double weight = 0.0;                    // uniform quadrature weight, prod L_i/N_i
    std::vector<double> eigenvalues;        // lambda_k per scalar mode (3 vector copies share it)
    std::array<AxisTables, 3> axes;

    int scalar_index(int k0, int k1, int k2) const {
        return (k0 * modes[1] + k1) * modes[2] + k2;
    }
};

// Per-axis tables for the torus basis. The derivative acts in coefficient
// space (cos/sin pair rotation), kept as a dense [nfact x nfact] matrix so the
// same contraction path serves values and derivatives.
struct EMAxisTables {
    int nfact = 0;
    int nnodes = 0;
    std::vector<double> synth;   // [nfact x nnodes]
    std::vector<double> synthT;  // [nnodes x nfact]
    std::vector<double> wsynth;
    std::vector<double> wsynthT;
    std::vector<double> dmat;    // [nfact x nfact], out = dmat * in
    std::vector<double> dmatT;
};

struct EMBasis {
    std::array<int, 3> bands{0, 0, 0};
    std::array<int, 3> nfact{0, 0, 0};
    std::array<int, 3> nodes{0, 0, 0};
    std::array<double, 3> lengths{0, 0, 0};
    int n_scalar = 0;
    std::size_t n_nodes = 0;
    double weight = 0.0;
    std::array<EMAxisTables, 3> axes;

    int scalar_index(int t0, int t1, int t2) const {
        return (t0 * nfact[1] + t1) * nfact[2] + t2;
    }
};

// The paired bases plus the geometry tying them together. em_at_box holds the
// torus factor values evaluated on the box sub-lattice; projecting a box grid
// field through it is numerically identical to zero-extending and projecting
// on the full torus grid, at a fraction of the cost.
struct SpectralBases {
    MagnetizationBasis mag;
    EMBasis em;
    std::array<int, 3> ratio{2, 2, 2};
    std::array<double, 3> offset{0, 0, 0};      // box corner inside the torus
    std::array<int, 3> node_offset{0, 0, 0};    // torus index of box node 0 per axis
    std::array<EMAxisTables, 3> em_at_box;      // nnodes = mag.nodes[i]
};

// Builders. quad_nodes entries of 0 mean "auto": 4*modes+1 (quartic products
// of modes integrate exactly; always odd). Explicit values must be odd and at
// least 4*modes+1. Throws ConfigError on any violation.
MagnetizationBasis build_magnetization_basis(const std::array<int, 3>& modes,
                                             const std::array<double, 3>& lengths,
                                             std::array<int, 3> quad_nodes = {0, 0, 0});

EMBasis build_em_basis(const std::array<int, 3>& bands,
                       const std::array<double, 3>& lengths,
                       std::array<int, 3> nodes = {0, 0, 0});

SpectralBases build_spectral_bases(const std::array<int, 3>& mag_modes,
                                   const std::array<double, 3>& box_lengths,
                                   const std::array<int, 3>& em_bands,
                                   std::array<int, 3> quad_nodes = {0, 0, 0},
                                   std::array<int, 3> torus_ratio = {2, 2, 2});

// Transforms. The in-place variants exist for hot paths; the value-returning
// wrappers are for everyone else.
void synthesize_H(const MagnetizationBasis& b, const CoeffsH& c, GridField& out);
GridField synthesize_H(const MagnetizationBasis& b, const CoeffsH& c);
void project_H(const MagnetizationBasis& b, const GridField& f, CoeffsH& out);
CoeffsH project_H(const MagnetizationBasis& b, const GridField& f);

void synthesize_Y(const EMBasis& b, const CoeffsY& c, GridField& out);
GridField synthesize_Y(const EMBasis& b, const CoeffsY& c);
void project_Y(const EMBasis& b, const GridField& f, CoeffsY& out);
CoeffsY project_Y(const EMBasis& b, const GridField& f);

// Torus field values on the box sub-lattice and its adjoint (equal to
// project_Y of the zero-extension).
void synthesize_Y_at_box(const SpectralBases& sb, const CoeffsY& c, GridField& out);
GridField synthesize_Y_at_box(const SpectralBases& sb, const CoeffsY& c);
void project_box_to_Y(const SpectralBases& sb, const GridField& f, CoeffsY& out);
CoeffsY project_box_to_Y(const SpectralBases& sb, const GridField& f);

// d/dx_axis of the synthesized magnetization field, on the box grid.
void gradient_H(const MagnetizationBasis& b, const CoeffsH& c, int axis, GridField& out);
GridField gradient_H(const MagnetizationBasis& b, const CoeffsH& c, int axis);

// Diagonal Laplacian on magnetization coefficients: (Delta u)_k = -lambda_k u_k.
CoeffsH apply_laplacian(const MagnetizationBasis& b, const CoeffsH& c);

// Exact spectral curl on the torus band (the band is closed under curl).
void apply_curl(const EMBasis& b, const CoeffsY& c, CoeffsY& out);
CoeffsY apply_curl(const EMBasis& b, const CoeffsY& c);

// Divergence as a scalar-mode coefficient vector (length n_scalar).
std::vector<double> divergence_coeffs(const EMBasis& b, const CoeffsY& c);

GridField extend_by_zero(const SpectralBases& sb, const GridField& boxfield);
GridField restrict_to_box(const SpectralBases& sb, const GridField& torusfield);

// Quadrature L2 inner products of grid fields (all three components).
double inner_product(const MagnetizationBasis& b, const GridField& f, const GridField& g);
double inner_product(const EMBasis& b, const GridField& f, const GridField& g);

// Coefficient-space functionals (Parseval).
double h_norm2(const CoeffsH& c);
double v_norm2(const MagnetizationBasis& b, const CoeffsH& c);     // ||u||_H^2 + ||grad u||_H^2
double grad_norm2(const MagnetizationBasis& b, const CoeffsH& c);  // sum lambda_k c_k^2
double l2_norm2(const CoeffsY& c);
double dot(const CoeffsH& a, const CoeffsH& b);
double dot(const CoeffsY& a, const CoeffsY& b);

} // namespace spinwell
