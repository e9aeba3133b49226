// Checks of the diagnostic and oracle layer itself: the cross-product
// summation identity, the Holder exponent estimator on trajectories whose
// regularity is known, moment bookkeeping, and the random state generators
// the other suites lean on.
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "spinwell/basis.hpp"
#include "spinwell/diagnostics.hpp"
#include "spinwell/dynamics.hpp"
#include "spinwell/energy.hpp"
#include "spinwell/integrator.hpp"
#include "spinwell/noise.hpp"

using namespace spinwell;

namespace {

constexpr double kPi = 3.14159265358979323846;

Dynamics make_world(const SpectralBases& sb, int J, double amp) {
    return make_dynamics(sb, make_anisotropy({0, 0, 1}, 0.5),
                         build_noise_family(sb.mag, J, amp, 0.5, "constant"), 1.0, 0.2,
                         no_forcing());
}

} // namespace

TEST_CASE("cross identity <u x Au, v> = sum_i <grad_i u, grad_i v x u>") {
    auto b = build_magnetization_basis({3, 3, 3}, {kPi, kPi, kPi});
    std::mt19937_64 eng(301);
    for (int trial = 0; trial < 8; ++trial) {
        CoeffsH u = random_coeffs_H(b, eng, 2.0);
        CoeffsH v = random_coeffs_H(b, eng, 2.0);
        CHECK(check_cross_identity(b, u, v) < 1e-10);
    }
}

TEST_CASE("sphere constraint check on hand states") {
    auto b = build_magnetization_basis({2, 2, 2}, {kPi, kPi, kPi});
    CoeffsH unit = CoeffsH::zeros(b.modes);
    unit.comp(2)[0] = std::sqrt(kPi * kPi * kPi);
    SphereCheck sc = check_sphere_constraint(b, unit);
    CHECK(sc.max_dev < 1e-13);
    CHECK(sc.l2_dev < 1e-13);

    for (double& x : unit.c)
        x *= 2.0;
    SphereCheck sc2 = check_sphere_constraint(b, unit);
    CHECK(sc2.max_dev == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("holder exponent: smooth path near 1, constant path infinite, noisy path rough") {
    auto sb = build_spectral_bases({2, 2, 2}, {kPi, kPi, kPi}, {3, 3, 3});
    std::mt19937_64 eng(307);
    GalerkinState init = random_state(sb, eng, 1.5);

    // Deterministic flow: increments scale linearly with the lag.
    Dynamics det = make_world(sb, 0, 0.0);
    BrownianPath det_path = make_brownian_path(1, 0, 0, 128, 1e-3);
    CHECK(holder_estimate(det, init, det_path) >= 0.9);

    // Equilibrium start: no motion at all, the estimator reports +infinity.
    Dynamics still = make_world(sb, 0, 0.0);
    BrownianPath still_path = make_brownian_path(1, 0, 0, 32, 1e-3);
    CHECK(std::isinf(holder_estimate(still, zero_state(sb), still_path)));

    // Strong noise: visibly rougher than the smooth case.
    Dynamics noisy = make_world(sb, 3, 1.0);
    BrownianPath noisy_path = make_brownian_path(5, 1, 3, 256, 4e-4);
    const double theta = holder_estimate(noisy, init, noisy_path);
    CHECK(std::isfinite(theta));
    CHECK(theta > 0.1);
    CHECK(theta < 0.9);
}

TEST_CASE("moment reports carry the four functionals with consistent gaps") {
    auto sb = build_spectral_bases({2, 2, 2}, {kPi, kPi, kPi}, {3, 3, 3});
    Dynamics dyn = make_world(sb, 2, 0.4);
    std::mt19937_64 eng(311);
    GalerkinState init = random_state(sb, eng, 1.2);
    SimOptions opt;
    opt.record_rows = false;
    opt.record_norm_resid = false;

    EnsembleStats st = run_ensemble(dyn, init, 40, 1e-3, 99, 8, opt, 1);
    auto reports = moment_estimates(st);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].name == "sup_v_norm2");
    CHECK(reports[1].name == "sup_zeeman2");
    CHECK(reports[2].name == "sup_electric2");
    CHECK(reports[3].name == "int_mxrho2");
    for (const auto& r : reports) {
        CHECK(std::isfinite(r.mean));
        CHECK(r.se >= 0.0);
        // E[X^2] >= (E[X])^2, up to aggregation rounding.
        CHECK(r.jensen_gap >= -1e-12 * std::max(1.0, r.mean_sq));
    }
}

TEST_CASE("random magnetization lands exactly on its target amplitude") {
    auto b = build_magnetization_basis({3, 3, 3}, {kPi, kPi, kPi});
    std::mt19937_64 eng(313);
    for (double target : {0.5, 2.0, 4.0}) {
        CoeffsH m = random_coeffs_H(b, eng, target);
        GridField g = synthesize_H(b, m);
        double maxn = 0;
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            const double r = std::sqrt(g.comp(0)[i] * g.comp(0)[i] +
                                       g.comp(1)[i] * g.comp(1)[i] +
                                       g.comp(2)[i] * g.comp(2)[i]);
            maxn = std::max(maxn, r);
        }
        CHECK(maxn == doctest::Approx(target).epsilon(1e-12));
    }
}

TEST_CASE("random states normalize their field coefficients") {
    auto sb = build_spectral_bases({3, 3, 3}, {kPi, kPi, kPi}, {4, 4, 4});
    std::mt19937_64 eng(317);
    GalerkinState s = random_state(sb, eng, 2.0);
    CHECK(l2_norm2(s.b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2_norm2(s.e) == doctest::Approx(1.0).epsilon(1e-12));

    // Two draws differ.
    GalerkinState s2 = random_state(sb, eng, 2.0);
    double diff = 0;
    for (std::size_t i = 0; i < s.m.c.size(); ++i)
        diff = std::max(diff, std::fabs(s.m.c[i] - s2.m.c[i]));
    CHECK(diff > 1e-6);
}

TEST_CASE("reduced-dynamics oracle: precession conserves, damping aligns") {
    const Vec3 a{0, 0, 1};
    const Vec3 m0{0.6, 0.0, 0.8};

    // Pure precession: |m| and the easy-axis angle are both invariant.
    Vec3 mp = oracle_reduced_llg(m0, a, 0.5, 1.0, 0.0, 2.0, 1e-5);
    CHECK(norm(mp) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dot(mp, a) == doctest::Approx(dot(m0, a)).epsilon(1e-10));
    // Phase advances at 2 K lambda1 (m.a): angle in the equatorial plane.
    const double omega = 2.0 * 0.5 * 1.0 * dot(m0, a);
    const double phase = std::atan2(mp.y, mp.x);
    // m x rho with rho = 2K (m.a) a rotates m about -a for positive K, l1.
    const double want = std::remainder(-omega * 2.0, 2.0 * kPi);
    CHECK(std::remainder(phase - want, 2.0 * kPi) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

    // Pure damping: alignment with the easy axis grows monotonically.
    Vec3 md = oracle_reduced_llg(m0, a, 0.5, 0.0, 0.3, 1.5, 1e-5);
    CHECK(norm(md) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dot(md, a) > dot(m0, a));
}
