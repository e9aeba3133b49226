// Structure checks of the assembled drift: the exact discrete identities
// (orthogonality, norm balance, curl pairing), the dissipation rate against a
// finite difference of the energy along the flow, the Maxwell right sides
// against a reassembly from transform primitives, and the switch semantics.
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "spinwell/basis.hpp"
#include "spinwell/diagnostics.hpp"
#include "spinwell/dynamics.hpp"
#include "spinwell/energy.hpp"
#include "spinwell/errors.hpp"
#include "spinwell/kernels.hpp"
#include "spinwell/noise.hpp"

using namespace spinwell;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Fixture {
    SpectralBases sb;
    Dynamics dyn;

    Fixture(int J, std::string_view profile, double amp = 0.25,
            std::array<int, 3> modes = {3, 3, 3})
        : sb(build_spectral_bases(modes, {kPi, kPi, kPi}, {4, 4, 4})),
          dyn(make_dynamics(sb, make_anisotropy({0, 0, 1}, 0.5),
                            build_noise_family(sb.mag, J, amp, 1.0, profile), 1.0, 0.2,
                            no_forcing())) {}
};

} // namespace

TEST_CASE("zero damping is refused") {
    auto sb = build_spectral_bases({2, 2, 2}, {kPi, kPi, kPi}, {3, 3, 3});
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    auto nf = build_noise_family(sb.mag, 2, 0.3, 1.0, "constant");
    CHECK_THROWS_AS(make_dynamics(sb, pot, nf, 1.0, 0.0, no_forcing()), ConfigError);
    CHECK_THROWS_AS(make_dynamics(sb, pot, nf, 1.0, -0.1, no_forcing()), ConfigError);
}

TEST_CASE("drift of the zero state vanishes") {
    Fixture fx(3, "constant");
    GalerkinState s = zero_state(fx.sb);
    StateDerivative d;
    std::vector<CoeffsH> gs;
    full_drift(fx.dyn, s, true, d, &gs);
    for (double x : d.dm.c)
        CHECK(x == 0.0);
    for (double x : d.db.c)
        CHECK(x == 0.0);
    for (double x : d.de.c)
        CHECK(x == 0.0);
    for (const auto& g : gs)
        for (double x : g.c)
            CHECK(x == 0.0);
}

TEST_CASE("discrete identities hold to rounding for constant noise profiles") {
    Fixture fx(5, "constant");
    std::mt19937_64 eng(101);
    for (int trial = 0; trial < 10; ++trial) {
        GalerkinState s = random_state(fx.sb, eng);
        IdentitySweep sw = identity_sweep(fx.dyn, s);
        CHECK(sw.mg_orth < 1e-10);
        CHECK(sw.norm_resid < 1e-10);
        CHECK(sw.rho_precession < 1e-9);
        CHECK(sw.rho_damping < 1e-9);
        CHECK(sw.curl_pairing < 1e-10);

        NormIdentityCheck nc = check_norm_identity(fx.dyn, s);
        CHECK(nc.relative < 1e-10);
    }
}

TEST_CASE("eigen profile: norm identity residual is exactly quadratic in the amplitude") {
    // Nonconstant noise fields leave the band under M x h, so the identity
    // picks up a truncation residual. Every noise term carries exactly two
    // factors of h, hence the residual scales with amp^2 to rounding; halving
    // the amplitude must quarter it.
    std::mt19937_64 eng(103);
    Fixture coarse(6, "eigen", 0.4, {2, 2, 2});
    GalerkinState s = random_state(coarse.sb, eng);

    NormIdentityCheck full = check_norm_identity(coarse.dyn, s);
    CHECK(full.relative > 1e-12); // genuinely nonzero

    Fixture half(6, "eigen", 0.2, {2, 2, 2});
    NormIdentityCheck halved = check_norm_identity(half.dyn, s);
    CHECK(full.relative / halved.relative == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("dissipation rate equals the energy derivative along the flow") {
    auto sb = build_spectral_bases({3, 3, 3}, {kPi, kPi, kPi}, {4, 4, 4});
    auto pot = make_anisotropy({0, 0, 1}, 0.5);

    // Uniform applied current so the forcing power term participates.
    GridField fgrid = GridField::zeros(Domain::Box, sb.mag.nodes);
    for (std::size_t i = 0; i < sb.mag.n_nodes; ++i) {
        fgrid.comp(0)[i] = 0.3;
        fgrid.comp(2)[i] = -0.1;
    }
    Dynamics dyn = make_dynamics(sb, pot, build_noise_family(sb.mag, 0, 0.0, 1.0, "constant"),
                                 1.0, 0.2, make_forcing(sb, project_H(sb.mag, fgrid)));

    std::mt19937_64 eng(107);
    GalerkinState s = random_state(sb, eng);
    StateDerivative d;
    StepDiag diag;
    full_drift(dyn, s, false, d, nullptr, &diag);

    const double eps = 1e-6;
    auto shifted = [&](double sign) {
        GalerkinState p = s;
        kern::ops().axpy(p.m.c.data(), sign * eps, d.dm.c.data(), p.m.c.size());
        kern::ops().axpy(p.b.c.data(), sign * eps, d.db.c.data(), p.b.c.size());
        kern::ops().axpy(p.e.c.data(), sign * eps, d.de.c.data(), p.e.c.size());
        return total_energy(sb, pot, p.m, p.b, p.e).total;
    };
    const double fd = (shifted(1.0) - shifted(-1.0)) / (2 * eps);
    CHECK(diag.rate(dyn.lambda2) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));

    // Without forcing the rate is a sum of two nonpositive terms.
    Dynamics free_dyn = make_dynamics(sb, pot, build_noise_family(sb.mag, 0, 0.0, 1.0, "constant"),
                                      1.0, 0.2, no_forcing());
    StepDiag d2;
    full_drift(free_dyn, s, false, d, nullptr, &d2);
    CHECK(d2.rate(free_dyn.lambda2) <= 0.0);
    CHECK(d2.forcing_power == 0.0);
}

TEST_CASE("maxwell right sides match a reassembly from primitives") {
    auto sb = build_spectral_bases({3, 3, 3}, {kPi, kPi, kPi}, {4, 4, 4});
    auto pot = make_anisotropy({0, 0, 1}, 0.5);
    GridField fgrid = GridField::zeros(Domain::Box, sb.mag.nodes);
    for (std::size_t i = 0; i < sb.mag.n_nodes; ++i)
        fgrid.comp(1)[i] = 0.2;
    Dynamics dyn = make_dynamics(sb, pot, build_noise_family(sb.mag, 2, 0.3, 1.0, "constant"),
                                 1.0, 0.2, make_forcing(sb, project_H(sb.mag, fgrid)));

    std::mt19937_64 eng(109);
    GalerkinState s = random_state(sb, eng);
    StateDerivative d;
    full_drift(dyn, s, false, d);

    // de = -pi_Y[1_D (E + f)] + curl(B - pi_Y Mbar)
    GridField ebox = synthesize_Y_at_box(sb, s.e);
    kern::ops().axpy(ebox.v.data(), 1.0, dyn.forcing.box_values.v.data(), ebox.v.size());
    CoeffsY de_ref = project_box_to_Y(sb, ebox);
    kern::ops().scale(de_ref.c.data(), -1.0, de_ref.c.size());
    CoeffsY mbar = project_box_to_Y(sb, synthesize_H(sb.mag, s.m));
    CoeffsY ydiff = s.b;
    kern::ops().axpy(ydiff.c.data(), -1.0, mbar.c.data(), ydiff.c.size());
    CoeffsY curl_yd = apply_curl(sb.em, ydiff);
    kern::ops().axpy(de_ref.c.data(), 1.0, curl_yd.c.data(), de_ref.c.size());
    for (std::size_t i = 0; i < de_ref.c.size(); ++i)
        CHECK(d.de.c[i] == doctest::Approx(de_ref.c[i]).epsilon(1e-12).scale(1.0));

    // db = db_sign curl E, default sign -1.
    CoeffsY curl_e = apply_curl(sb.em, s.e);
    for (std::size_t i = 0; i < curl_e.c.size(); ++i)
        CHECK(d.db.c[i] == doctest::Approx(-curl_e.c[i]).epsilon(1e-13).scale(1.0));

    // Flipping the sign convention flips db and nothing else.
    Dynamics dyn_p = make_dynamics(sb, pot, build_noise_family(sb.mag, 2, 0.3, 1.0, "constant"),
                                   1.0, 0.2, no_forcing(), true, +1.0);
    StateDerivative dp;
    full_drift(dyn_p, s, false, dp);
    for (std::size_t i = 0; i < curl_e.c.size(); ++i)
        CHECK(dp.db.c[i] == doctest::Approx(curl_e.c[i]).epsilon(1e-13).scale(1.0));
    for (std::size_t i = 0; i < dp.dm.c.size(); ++i)
        CHECK(dp.dm.c[i] == d.dm.c[i]);
}

TEST_CASE("decoupled mode drops the induction feedback") {
    Fixture fx(2, "constant");
    fx.dyn.em_coupling = false;
    std::mt19937_64 eng(113);
    GalerkinState s1 = random_state(fx.sb, eng);
    GalerkinState s2 = s1;
    std::normal_distribution<double> dist;
    for (double& x : s2.b.c)
        x = dist(eng);

    StateDerivative d1, d2;
    full_drift(fx.dyn, s1, true, d1);
    full_drift(fx.dyn, s2, true, d2);
    for (std::size_t i = 0; i < d1.dm.c.size(); ++i)
        CHECK(d1.dm.c[i] == d2.dm.c[i]); // magnetization blind to B

    // de picks up curl B instead of curl(B - pi Mbar).
    GridField ebox = synthesize_Y_at_box(fx.sb, s1.e);
    CoeffsY de_ref = project_box_to_Y(fx.sb, ebox);
    kern::ops().scale(de_ref.c.data(), -1.0, de_ref.c.size());
    CoeffsY curl_b = apply_curl(fx.sb.em, s1.b);
    kern::ops().axpy(de_ref.c.data(), 1.0, curl_b.c.data(), de_ref.c.size());
    for (std::size_t i = 0; i < de_ref.c.size(); ++i)
        CHECK(d1.de.c[i] == doctest::Approx(de_ref.c[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("diffusion fields from the drift call match the standalone path") {
    Fixture fx(4, "constant");
    std::mt19937_64 eng(127);
    GalerkinState s = random_state(fx.sb, eng);

    StateDerivative d;
    std::vector<CoeffsH> gs;
    full_drift(fx.dyn, s, false, d, &gs);
    REQUIRE(gs.size() == 4);
    for (int j = 0; j < 4; ++j) {
        StateDerivative dj;
        full_diffusion(fx.dyn, s, j, dj);
        for (std::size_t i = 0; i < gs[j].c.size(); ++i)
            CHECK(gs[j].c[i] == doctest::Approx(dj.dm.c[i]).epsilon(1e-14).scale(1.0));
        for (double x : dj.db.c)
            CHECK(x == 0.0);
        for (double x : dj.de.c)
            CHECK(x == 0.0);
    }
}

TEST_CASE("ito and stratonovich drifts differ by the correction") {
    Fixture fx(3, "constant", 0.6);
    std::mt19937_64 eng(131);
    GalerkinState s = random_state(fx.sb, eng);

    StateDerivative d_ito, d_strat;
    full_drift(fx.dyn, s, true, d_ito);
    full_drift(fx.dyn, s, false, d_strat);
    CoeffsH corr = ito_correction(fx.sb.mag, fx.dyn.noise, s.m, fx.dyn.lambda1,
                                  fx.dyn.lambda2);
    for (std::size_t i = 0; i < corr.c.size(); ++i)
        CHECK(d_ito.dm.c[i] - d_strat.dm.c[i] ==
              doctest::Approx(corr.c[i]).epsilon(1e-11).scale(1.0));
    // The electromagnetic right sides carry no correction.
    for (std::size_t i = 0; i < d_ito.de.c.size(); ++i) {
        CHECK(d_ito.de.c[i] == d_strat.de.c[i]);
        CHECK(d_ito.db.c[i] == d_strat.db.c[i]);
    }
}
