// Noise family and diffusion operator checks. Frozen references: psi(4) = 1/2
// by symmetry of the quintic blend, the family constant of a single pointwise
// unit constant field is 1 + |D|, and on the one-mode band every operator
// reduces to Vec3 algebra evaluated longhand here.
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "spinwell/basis.hpp"
#include "spinwell/diagnostics.hpp"
#include "spinwell/dynamics.hpp"
#include "spinwell/errors.hpp"
#include "spinwell/noise.hpp"

using namespace spinwell;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("psi truncation profile") {
    CHECK(psi_radial(0.0) == 1.0);
    CHECK(psi_radial(2.999) == 1.0);
    CHECK(psi_radial(3.0) == 1.0);
    CHECK(psi_radial(4.0) == doctest::Approx(0.5).epsilon(1e-15)); // blend midpoint
    CHECK(psi_radial(5.0) == 0.0);
    CHECK(psi_radial(7.5) == 0.0);

    // Slope bounded by 15/16 (quintic smoothstep peak over the width-2 blend).
    const double eps = 1e-6;
    double steepest = 0.0;
    for (double r = 2.5; r < 5.5; r += 0.01) {
        const double s = (psi_radial(r + eps) - psi_radial(r - eps)) / (2 * eps);
        steepest = std::max(steepest, std::fabs(s));
        CHECK(s <= 1e-12); // nonincreasing
    }
    CHECK(steepest <= 15.0 / 16.0 + 1e-9);
    CHECK(steepest == doctest::Approx(15.0 / 16.0).epsilon(1e-3));

    // Vector gradient against finite differences, inside and outside the blend.
    for (const Vec3& x : {Vec3{1.0, 0.5, -0.2}, Vec3{2.5, 2.0, 1.5}, Vec3{3.0, 3.0, 3.0}}) {
        Vec3 g = psi_grad(x);
        for (int c = 0; c < 3; ++c) {
            Vec3 p = x, m = x;
            (&p.x)[c] += eps;
            (&m.x)[c] -= eps;
            const double fd = (psi_eval(p) - psi_eval(m)) / (2 * eps);
            CHECK((&g.x)[c] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("constant profile: amplitudes, cycling, family constant") {
    auto b = build_magnetization_basis({3, 3, 3}, {kPi, kPi, kPi});
    const double vol = kPi * kPi * kPi;

    // One pointwise-unit field: c_h^2 = sup|h| + ||h||_W12^2 = 1 + |D|.
    NoiseFamily unit = build_noise_family(b, 1, 1.0, 0.0, "constant");
    CHECK(unit.c_h2 == doctest::Approx(1.0 + vol).epsilon(1e-12));
    CHECK(c_h_constant(b, unit) == doctest::Approx(unit.c_h2).epsilon(1e-14));

    NoiseFamily f = build_noise_family(b, 5, 0.7, 1.3, "constant");
    REQUIRE(f.J == 5);
    for (int j = 0; j < f.J; ++j) {
        const double a_j = 0.7 * std::pow(j + 1.0, -1.3);
        CHECK(f.amplitudes[j] == doctest::Approx(a_j).epsilon(1e-14));
        // Nodal value is a_j along direction j mod 3, zero elsewhere.
        const GridField& g = f.grids[j];
        for (int c = 0; c < 3; ++c) {
            double lo = g.comp(c)[0], hi = g.comp(c)[0];
            for (std::size_t i = 0; i < g.nodes(); ++i) {
                lo = std::min(lo, g.comp(c)[i]);
                hi = std::max(hi, g.comp(c)[i]);
            }
            CHECK(hi - lo < 1e-13); // spatially constant
            const double want = (c == j % 3) ? a_j : 0.0;
            CHECK(hi == doctest::Approx(want).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(build_noise_family(b, -1, 1.0, 0.0, "constant"), ConfigError);
    CHECK_THROWS_AS(build_noise_family(b, 2, -0.5, 0.0, "constant"), ConfigError);
    CHECK_THROWS_AS(build_noise_family(b, 2, 1.0, 0.0, "fancy"), ConfigError);
}

TEST_CASE("eigen profile walks the spectrum upward") {
    auto b = build_magnetization_basis({2, 2, 2}, {kPi, kPi, kPi});
    NoiseFamily f = build_noise_family(b, 6, 0.4, 0.8, "eigen");

    // First three fields sit on the ground mode and are constant in space;
    // the next three live on the first excited eigenfunction.
    for (int j = 0; j < 6; ++j) {
        const GridField& g = f.grids[j];
        const int c = j % 3;
        double lo = g.comp(c)[0], hi = g.comp(c)[0];
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            lo = std::min(lo, g.comp(c)[i]);
            hi = std::max(hi, g.comp(c)[i]);
        }
        if (j < 3)
            CHECK(hi - lo < 1e-13);
        else
            // An excited cosine mode spans 2 max|e_k| ~ 0.51 times the field
            // amplitude here; anything comparable is genuinely non-constant.
            CHECK(hi - lo > 0.4 * f.amplitudes[j]);
    }
    CHECK(c_h_constant(b, f) == doctest::Approx(f.c_h2).epsilon(1e-13));

    // The band holds 8 scalar modes, so at most 24 fields.
    CHECK_THROWS_AS(build_noise_family(b, 25, 0.4, 0.8, "eigen"), ConfigError);
}

TEST_CASE("every diffusion field is orthogonal to the magnetization") {
    auto sb = build_spectral_bases({3, 3, 3}, {kPi, kPi, kPi}, {4, 4, 4});
    NoiseFamily f = build_noise_family(sb.mag, 6, 0.5, 0.9, "eigen");
    std::mt19937_64 eng(61);
    // Inside the psi plateau and out in the blend region both.
    for (double target : {2.0, 4.5}) {
        CoeffsH m = random_coeffs_H(sb.mag, eng, target);
        for (int j = 0; j < f.J; ++j) {
            CoeffsH g = diffusion_G(sb.mag, f, j, m, 1.0, 0.2);
            const double rel = std::fabs(dot(m, g)) /
                               std::max(1.0, std::sqrt(h_norm2(m) * h_norm2(g)));
            CHECK(rel < 1e-12);
        }
    }
}

TEST_CASE("one-mode band: diffusion and correction reduce to Vec3 algebra") {
    auto b = build_magnetization_basis({1, 1, 1}, {kPi, kPi, kPi});
    const double sq = std::sqrt(kPi * kPi * kPi);
    NoiseFamily f = build_noise_family(b, 2, 0.7, 0.5, "constant");
    const double l1 = 0.9, l2 = 0.3;

    for (const Vec3 mval : {Vec3{0.4, -1.2, 1.5}, Vec3{2.4, -2.4, 1.0}}) {
        CoeffsH m = CoeffsH::zeros(b.modes);
        m.comp(0)[0] = mval.x * sq;
        m.comp(1)[0] = mval.y * sq;
        m.comp(2)[0] = mval.z * sq;
        const double psi = psi_radial(norm(mval));

        Vec3 corr_ref{0, 0, 0};
        for (int j = 0; j < f.J; ++j) {
            Vec3 h{0, 0, 0};
            (&h.x)[j % 3] = f.amplitudes[j];
            const Vec3 A = cross(mval, h);
            const Vec3 B = cross(mval, A);

            const Vec3 G = l1 * A + (l2 * psi) * B;
            CoeffsH g = diffusion_G(b, f, j, m, l1, l2);
            CHECK(g.comp(0)[0] == doctest::Approx(G.x * sq).epsilon(1e-12).scale(1.0));
            CHECK(g.comp(1)[0] == doctest::Approx(G.y * sq).epsilon(1e-12).scale(1.0));
            CHECK(g.comp(2)[0] == doctest::Approx(G.z * sq).epsilon(1e-12).scale(1.0));

            corr_ref += (l1 * l1) * cross(A, h);
            corr_ref += (l1 * l2 * psi) * cross(B, h);
            corr_ref += (l2 * l2 * psi) * cross(mval, cross(B, h));
            corr_ref += (l1 * l2 * psi) * cross(mval, cross(A, h));
            corr_ref += (l2 * l2) * cross(psi * B, A);
        }
        corr_ref = 0.5 * corr_ref;

        CoeffsH corr = ito_correction(b, f, m, l1, l2);
        CHECK(corr.comp(0)[0] == doctest::Approx(corr_ref.x * sq).epsilon(1e-12).scale(1.0));
        CHECK(corr.comp(1)[0] == doctest::Approx(corr_ref.y * sq).epsilon(1e-12).scale(1.0));
        CHECK(corr.comp(2)[0] == doctest::Approx(corr_ref.z * sq).epsilon(1e-12).scale(1.0));
    }
}

// Rebuild the projected correction term by term from transform primitives and
// per-node Vec3 loops, inner projections exactly where the operator defines
// them: around M x h_j in the first term and around psi M x (M x h_j) in the
// fifth. Any drift in the projection placement shows up here.
TEST_CASE("projected correction matches a termwise reassembly") {
    auto b = build_magnetization_basis({2, 2, 2}, {kPi, kPi, kPi});
    NoiseFamily f = build_noise_family(b, 6, 0.45, 0.6, "eigen");
    const double l1 = 0.8, l2 = 0.35;

    std::mt19937_64 eng(67);
    CoeffsH m = random_coeffs_H(b, eng, 2.4);
    GridField mg = synthesize_H(b, m);
    std::vector<double> psi;
    psi_values(mg, psi);

    const std::size_t nn = mg.nodes();
    auto at = [&](const GridField& g, std::size_t i) {
        return Vec3{g.comp(0)[i], g.comp(1)[i], g.comp(2)[i]};
    };
    auto put = [&](GridField& g, std::size_t i, const Vec3& v) {
        g.comp(0)[i] = v.x;
        g.comp(1)[i] = v.y;
        g.comp(2)[i] = v.z;
    };

    GridField acc = GridField::zeros(Domain::Box, b.nodes);
    GridField A = acc, B = acc, tmp = acc;
    for (int j = 0; j < f.J; ++j) {
        for (std::size_t i = 0; i < nn; ++i) {
            const Vec3 mv = at(mg, i), hv = at(f.grids[j], i);
            put(A, i, cross(mv, hv));
            put(B, i, cross(mv, cross(mv, hv)));
        }
        GridField pA = synthesize_H(b, project_H(b, A));
        for (std::size_t i = 0; i < nn; ++i)
            put(tmp, i, psi[i] * at(B, i));
        GridField pB = synthesize_H(b, project_H(b, tmp));

        for (std::size_t i = 0; i < nn; ++i) {
            const Vec3 mv = at(mg, i), hv = at(f.grids[j], i);
            const Vec3 Av = at(A, i), Bv = at(B, i);
            Vec3 sum = (l1 * l1) * cross(at(pA, i), hv);
            sum += (l1 * l2 * psi[i]) * cross(Bv, hv);
            sum += (l2 * l2 * psi[i]) * cross(mv, cross(Bv, hv));
            sum += (l1 * l2 * psi[i]) * cross(mv, cross(Av, hv));
            sum += (l2 * l2) * cross(at(pB, i), Av);
            put(tmp, i, sum);
        }
        for (std::size_t i = 0; i < 3 * nn; ++i)
            acc.v[i] += tmp.v[i];
    }
    CoeffsH ref = project_H(b, acc);
    for (double& x : ref.c)
        x *= 0.5;

    CoeffsH corr = ito_correction(b, f, m, l1, l2);
    double scale = 0;
    for (double x : ref.c)
        scale = std::max(scale, std::fabs(x));
    CHECK(max_abs_diff(corr.c, ref.c) < 1e-12 * std::max(1.0, scale));
}

TEST_CASE("unprojected correction agrees with its finite-difference oracle") {
    auto b = build_magnetization_basis({3, 3, 3}, {kPi, kPi, kPi});
    NoiseFamily f = build_noise_family(b, 4, 0.4, 0.7, "constant");
    const double l1 = 1.0, l2 = 0.2;

    std::mt19937_64 eng(71);
    // Largest nodal |M| of 2 keeps the whole finite-difference stencil on the
    // psi plateau, where the correction is the exact derivative.
    CoeffsH m = random_coeffs_H(b, eng, 2.0);
    GridField mg = synthesize_H(b, m);
    std::vector<double> psi;
    psi_values(mg, psi);

    NoiseWork w;
    GridField corr;
    ito_correction_unprojected(f, mg, psi, l1, l2, corr, w);

    GridField fd;
    oracle_fd_correction(f, mg, l1, l2, 1e-5, fd);

    double scale = 0;
    for (double x : corr.v)
        scale = std::max(scale, std::fabs(x));
    CHECK(max_abs_diff(corr.v, fd.v) < 1e-5 * std::max(1.0, scale));
}

TEST_CASE("inner projections are not a no-op") {
    // With constant fields and psi = 1 the only projection that can bind is
    // the one inside the fifth term: M x (M x h) leaves the band. Projecting
    // the unprojected correction therefore must not reproduce the projected
    // operator.
    auto b = build_magnetization_basis({2, 2, 2}, {kPi, kPi, kPi});
    NoiseFamily f = build_noise_family(b, 3, 0.8, 0.0, "constant");
    std::mt19937_64 eng(73);
    CoeffsH m = random_coeffs_H(b, eng, 2.0);
    GridField mg = synthesize_H(b, m);
    std::vector<double> psi;
    psi_values(mg, psi);

    CoeffsH proj = ito_correction(b, f, m, 1.0, 0.4);
    NoiseWork w;
    GridField unproj;
    ito_correction_unprojected(f, mg, psi, 1.0, 0.4, unproj, w);
    CoeffsH via = project_H(b, unproj);

    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < proj.c.size(); ++i) {
        diff = std::max(diff, std::fabs(proj.c[i] - via.c[i]));
        scale = std::max(scale, std::fabs(proj.c[i]));
    }
    CHECK(diff > 1e-8 * std::max(1.0, scale));
}
