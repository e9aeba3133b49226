// Energy and effective-field checks. The frozen constants here were worked
// out by hand from the definitions: phi(0) = K, phi'(a) = -2K a on the
// plateau, and the unprojected Zeeman energy of a unit constant state with
// B = 0 is half the box volume.
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "spinwell/basis.hpp"
#include "spinwell/diagnostics.hpp"
#include "spinwell/dynamics.hpp"
#include "spinwell/energy.hpp"
#include "spinwell/errors.hpp"

using namespace spinwell;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpectralBases small_bases() {
    return build_spectral_bases({4, 4, 4}, {kPi, kPi, kPi}, {4, 4, 4});
}

// Coefficients of a spatially constant vector field on the box: only the
// (0,0,0) mode, scaled by sqrt(|D|) because e_0 = 1/sqrt(|D|).
CoeffsH constant_m(const MagnetizationBasis& b, const Vec3& v) {
    CoeffsH c = CoeffsH::zeros(b.modes);
    const double vol = b.lengths[0] * b.lengths[1] * b.lengths[2];
    c.comp(0)[0] = v.x * std::sqrt(vol);
    c.comp(1)[0] = v.y * std::sqrt(vol);
    c.comp(2)[0] = v.z * std::sqrt(vol);
    return c;
}

} // namespace

TEST_CASE("anisotropy potential: plateau values and cutoff") {
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    CHECK(pot.phi({0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15)); // K at m = 0
    CHECK(pot.phi({0, 0, 1}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(pot.phi({0, 0, -1}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(pot.phi({11.0, 0, 0}) == 0.0); // beyond the cutoff radius

    // phi'(a) = -2 K a on the plateau.
    Vec3 g = pot.phi_grad({0, 0, 1});
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);
    CHECK(g.z == doctest::Approx(-2.0 * 0.5).epsilon(1e-14));

    // Axis gets normalized by the builder.
    auto pot2 = make_anisotropy({0, 3, 4}, 1.0);
    CHECK(pot2.axis.y == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(pot2.axis.z == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(make_anisotropy({0, 0, 0}, 1.0), ConfigError);
    CHECK_THROWS_AS(make_anisotropy({0, 0, 1}, 1.0, 1.0), ConfigError);
}

TEST_CASE("anisotropy derivatives agree with finite differences") {
    auto pot = make_anisotropy({0.3, -0.2, 0.93}, 0.7);
    std::mt19937_64 eng(7);
    std::normal_distribution<double> dist;
    const double eps = 1e-6;
    // Points on the plateau, inside the blend shell, and past the cutoff.
    for (double radius : {0.9, 1.8, 4.0, 6.5, 8.7, 12.0}) {
        Vec3 m{dist(eng), dist(eng), dist(eng)};
        m = (radius / norm(m)) * m;
        Vec3 g = pot.phi_grad(m);
        for (int c = 0; c < 3; ++c) {
            Vec3 dp = m, dmn = m;
            (&dp.x)[c] += eps;
            (&dmn.x)[c] -= eps;
            const double fd = (pot.phi(dp) - pot.phi(dmn)) / (2 * eps);
            CHECK((&g.x)[c] == doctest::Approx(fd).epsilon(5e-7));
        }
        double H[9];
        pot.phi_hess(m, H);
        for (int c = 0; c < 3; ++c) {
            Vec3 dp = m, dmn = m;
            (&dp.x)[c] += eps;
            (&dmn.x)[c] -= eps;
            Vec3 gp = pot.phi_grad(dp), gm = pot.phi_grad(dmn);
            for (int r = 0; r < 3; ++r) {
                const double fd = ((&gp.x)[r] - (&gm.x)[r]) / (2 * eps);
                CHECK(H[3 * r + c] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
            }
        }
    }
}

TEST_CASE("unit constant state: breakdown matches hand values") {
    auto sb = small_bases();
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    const double vol = kPi * kPi * kPi;

    CoeffsH m = constant_m(sb.mag, {0, 0, 1});
    CoeffsY b = CoeffsY::zeros(sb.em.bands);
    CoeffsY e = CoeffsY::zeros(sb.em.bands);

    EnergyBreakdown en = total_energy(sb, pot, m, b, e);
    CHECK(en.anisotropy == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(en.exchange == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(en.electric == 0.0);
    CHECK(en.total == doctest::Approx(en.anisotropy + en.exchange + en.zeeman + en.electric).epsilon(1e-14));

    // Unprojected Zeeman of the zero-extension: 1/2 int_D |0 - 1|^2 = |D|/2.
    const double zu = zeeman_unprojected(sb, m, b);
    CHECK(zu == doctest::Approx(0.5 * vol).epsilon(1e-12));
    // The band projection of a zero-extension is a strict contraction.
    CHECK(en.zeeman < zu);
    CHECK(en.zeeman > 0.0);

    // Tilting the constant state off axis pays K per unit volume at m = x.
    CoeffsH mx = constant_m(sb.mag, {1, 0, 0});
    EnergyBreakdown enx = total_energy(sb, pot, mx, b, e);
    CHECK(enx.anisotropy == doctest::Approx(0.5 * vol).epsilon(1e-12));

    // Electric energy is the plain squared coefficient norm over two.
    std::mt19937_64 eng(3);
    std::normal_distribution<double> dist;
    for (double& x : e.c)
        x = 0.1 * dist(eng);
    EnergyBreakdown ene = total_energy(sb, pot, m, b, e);
    CHECK(ene.electric == doctest::Approx(0.5 * l2_norm2(e)).epsilon(1e-13));
}

TEST_CASE("effective field is the negative energy gradient") {
    auto sb = small_bases();
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    std::mt19937_64 eng(17);
    GalerkinState s = random_state(sb, eng);

    CoeffsH rho = effective_field(sb, pot, s.m, s.b, true);
    for (int d = 0; d < 8; ++d) {
        CoeffsH dir = random_coeffs_H(sb.mag, eng, 1.0);
        const double fd = oracle_fd_energy_gradient(sb, pot, s, dir, 1e-5);
        const double lhs = -dot(rho, dir);
        CHECK(lhs == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("electromagnetic gradients against finite differences") {
    auto sb = small_bases();
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    std::mt19937_64 eng(19);
    GalerkinState s = random_state(sb, eng);

    CoeffsY gb = energy_grad_B(sb, s.m, s.b);
    CoeffsY ge = energy_grad_E(s.e);
    std::normal_distribution<double> dist;
    const double eps = 1e-6;
    for (int d = 0; d < 4; ++d) {
        CoeffsY dir = CoeffsY::zeros(sb.em.bands);
        for (double& x : dir.c)
            x = dist(eng);

        CoeffsY bp = s.b, bm = s.b;
        for (std::size_t i = 0; i < dir.c.size(); ++i) {
            bp.c[i] += eps * dir.c[i];
            bm.c[i] -= eps * dir.c[i];
        }
        const double fdb = (total_energy(sb, pot, s.m, bp, s.e).total -
                            total_energy(sb, pot, s.m, bm, s.e).total) / (2 * eps);
        CHECK(dot(gb, dir) == doctest::Approx(fdb).epsilon(1e-7).scale(1.0));

        CoeffsY ep = s.e, em = s.e;
        for (std::size_t i = 0; i < dir.c.size(); ++i) {
            ep.c[i] += eps * dir.c[i];
            em.c[i] -= eps * dir.c[i];
        }
        const double fde = (total_energy(sb, pot, s.m, s.b, ep).total -
                            total_energy(sb, pot, s.m, s.b, em).total) / (2 * eps);
        CHECK(dot(ge, dir) == doctest::Approx(fde).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("hessian form matches the four-point difference") {
    auto sb = small_bases();
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    std::mt19937_64 eng(23);
    GalerkinState s = random_state(sb, eng);

    for (int d = 0; d < 5; ++d) {
        CoeffsH u = random_coeffs_H(sb.mag, eng, 1.0);
        CoeffsH v = random_coeffs_H(sb.mag, eng, 1.0);
        const double form = hessian_form(sb, pot, s.m, u, v);
        const double fd = oracle_fd_energy_hessian(sb, pot, s, u, v, 1e-4);
        CHECK(form == doctest::Approx(fd).epsilon(1e-5).scale(1.0));

        // The V-form variant differs from the exact Hessian by exactly the
        // projection deficit of the Zeeman block.
        GridField ug = synthesize_H(sb.mag, u);
        GridField vg = synthesize_H(sb.mag, v);
        CoeffsY pu = project_box_to_Y(sb, ug);
        CoeffsY pv = project_box_to_Y(sb, vg);
        const double gap = dot(u, v) - dot(pu, pv);
        CHECK(hessian_form_V(sb, pot, s.m, u, v) - form == doctest::Approx(gap).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("dropping the induction coupling decouples rho from B") {
    auto sb = small_bases();
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    std::mt19937_64 eng(29);
    GalerkinState s1 = random_state(sb, eng);
    GalerkinState s2 = s1;
    std::normal_distribution<double> dist;
    for (double& x : s2.b.c)
        x = dist(eng);

    CoeffsH r1 = effective_field(sb, pot, s1.m, s1.b, false);
    CoeffsH r2 = effective_field(sb, pot, s2.m, s2.b, false);
    for (std::size_t i = 0; i < r1.c.size(); ++i)
        CHECK(r1.c[i] == r2.c[i]);

    // With the coupling on they must differ.
    CoeffsH c1 = effective_field(sb, pot, s1.m, s1.b, true);
    CoeffsH c2 = effective_field(sb, pot, s2.m, s2.b, true);
    double diff = 0;
    for (std::size_t i = 0; i < c1.c.size(); ++i)
        diff = std::max(diff, std::fabs(c1.c[i] - c2.c[i]));
    CHECK(diff > 1e-6);
}
