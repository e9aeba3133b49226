// Noise family {h_j}, truncation psi, the diffusion operators G_j, and the
// five-term correction converting the Stratonovich system to Ito form.
#pragma once

#include <string_view>
#include <vector>

#include "spinwell/basis.hpp"
#include "spinwell/vec3.hpp"

namespace spinwell {

struct NoiseFamily {
    int J = 0;
    std::vector<CoeffsH> modes;    // h_j as band-limited coefficients
    std::vector<GridField> grids;  // nodal values of each h_j, cached
    std::vector<double> amplitudes;
    double c_h2 = 0.0;             // sum_j ||h_j||_inf + sum_j ||h_j||_W12^2
};

// Profiles: "constant" gives spatially constant fields cycling the Cartesian
// directions; "eigen" attaches each field to a Laplacian eigenfunction,
// walking the spectrum upward (three directions per scalar mode). Amplitude
// of field j is amp * (j+1)^(-decay).
NoiseFamily build_noise_family(const MagnetizationBasis& b, int J, double amp,
                               double decay, std::string_view profile);

// Recomputes the constant of the family from its stored modes (the builder
// caches the same value in c_h2). Infinity norm taken over quadrature nodes;
// the Sobolev part is exact in the band.
double c_h_constant(const MagnetizationBasis& b, const NoiseFamily& f);

// Radial truncation: 1 on |x| <= 3, 0 on |x| >= 5, quintic blend between,
// maximal slope 15/16 < 1.
double psi_radial(double r);
double psi_eval(const Vec3& x);
Vec3 psi_grad(const Vec3& x);

// psi(|M(x)|) per node from a synthesized magnetization.
void psi_values(const GridField& mgrid, std::vector<double>& out);

// Buffers for the grid stage of the diffusion and correction evaluations.
struct NoiseWork {
    GridField a;    // M x h
    GridField bb;   // M x (M x h)
    GridField pa;   // resynthesized projection of M x h
    GridField pb;   // resynthesized projection of psi M x (M x h)
    GridField t1;
    GridField t2;
    GridField acc;
    CoeffsH htmp;
};

// G_j(M) = l1 pi[M x h_j] + l2 pi[psi(M) M x (M x h_j)]; one fused projection.
void diffusion_G(const MagnetizationBasis& b, const NoiseFamily& f, int j,
                 const GridField& mgrid, const std::vector<double>& psi,
                 double l1, double l2, CoeffsH& out, NoiseWork& w);
CoeffsH diffusion_G(const MagnetizationBasis& b, const NoiseFamily& f, int j,
                    const CoeffsH& m, double l1, double l2);

// (1/2) sum_j of the five-term correction, with inner projections applied to
// the M x h_j factor of the first term and the psi M x (M x h_j) factor of
// the fifth, exactly as the discrete system prescribes.
void ito_correction(const MagnetizationBasis& b, const NoiseFamily& f,
                    const GridField& mgrid, const std::vector<double>& psi,
                    double l1, double l2, CoeffsH& out, NoiseWork& w);
CoeffsH ito_correction(const MagnetizationBasis& b, const NoiseFamily& f,
                       const CoeffsH& m, double l1, double l2);

// Projection-free variants used by the finite-difference oracles: the raw
// vector fields on the grid, no pi anywhere.
void diffusion_G_psi(const NoiseFamily& f, int j, const GridField& mgrid,
                     const std::vector<double>& psi, double l1, double l2,
                     GridField& out, NoiseWork& w);
void ito_correction_unprojected(const NoiseFamily& f, const GridField& mgrid,
                                const std::vector<double>& psi, double l1, double l2,
                                GridField& out, NoiseWork& w);

} // namespace spinwell
