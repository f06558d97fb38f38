#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include "qmirror/pipeline.hpp"
#include "test_config.hpp"

using namespace qmirror;

TEST_CASE("coefficient traces from the switch-on window") {
    const Config cfg = test::small_config();
    const Pipeline pl = build_pipeline(cfg);
    const auto& tr = pl.trace;
    REQUIRE(tr.t.size() > 100);

    SUBCASE("all four coefficients vanish at the switch-on instant") {
        CHECK(tr.gamma[0] == 0.0);
        CHECK(tr.d_pp[0] == 0.0);
        CHECK(tr.d_xp[0] == 0.0);
        CHECK(tr.domega2_sq[0] == 0.0);
        CHECK(tr.omega_ren_sq[0] ==
              doctest::Approx(cfg.phys.trap_frequency * cfg.phys.trap_frequency));
    }

    SUBCASE("early-window growth orders from the kernel parities") {
        // sin(W tau) x odd mu_M ~ tau^2 integrand -> Gamma ~ T^3;
        // cos(W tau) x even nu_M -> D_PP ~ T; cos x odd -> dW2^2 ~ T^2.
        // The Taylor window closes at the band-limit time 1/Lambda, so the
        // lag grid here is refined well below it.
        Config fine = cfg;
        fine.grid.time_horizon = 50.0;
        fine.grid.time_samples = 16384; // dt ~ 3e-3 << 1/Lambda
        const Pipeline plf = build_pipeline(fine, {.fdr_audit = false,
                                                   .with_impulse = false});
        const auto& trf = plf.trace;
        const double g = trf.gamma[8] / trf.gamma[4];
        CHECK(g == doctest::Approx(8.0).epsilon(0.25));
        const double d = trf.d_pp[8] / trf.d_pp[4];
        CHECK(d == doctest::Approx(2.0).epsilon(0.15));
        const double o = trf.domega2_sq[8] / trf.domega2_sq[4];
        CHECK(o == doctest::Approx(4.0).epsilon(0.2));
    }

    SUBCASE("long-time plateau matches the spectral stationary values") {
        CHECK(tr.gamma.back() == doctest::Approx(tr.stat.gamma_s).epsilon(0.02));
        CHECK(tr.d_pp.back() == doctest::Approx(tr.stat.d_pp_s).epsilon(0.02));
    }

    SUBCASE("printed-convention signs and the physical map") {
        // stationary values are negative in the paper's bookkeeping; the
        // stepper map restores positive drift and diffusion
        CHECK(tr.stat.d_pp_s < 0.0);
        CHECK(tr.stat.gamma_s < 0.0);
        const StepCoeffs sc = stationary_step_coeffs(tr, cfg);
        CHECK(sc.d_p > 0.0);
        CHECK(sc.gamma > 0.0);
        // equilibrium balance D_p / (2 gamma) = (hbar M W / 2) z(W) via DsGs
        const double z = thermal_factor(cfg.phys.trap_frequency, cfg.phys);
        const double target = 0.5 * cfg.phys.hbar * cfg.phys.mirror_mass *
                              cfg.phys.trap_frequency * z;
        CHECK(sc.d_p / (2.0 * sc.gamma) == doctest::Approx(target).epsilon(2e-3));
    }

    SUBCASE("renormalized frequency bookkeeping") {
        for (std::size_t i : {std::size_t(5), tr.t.size() - 1})
            CHECK(tr.omega_ren_sq[i] ==
                  doctest::Approx(cfg.phys.trap_frequency * cfg.phys.trap_frequency +
                                  tr.delta_omega1_sq + tr.domega2_sq[i]));
    }

    SUBCASE("lag range is enforced") {
        CHECK_THROWS_AS(coefficient_traces(pl.mirror, cfg, 1e9), PhysicsError);
    }
}

TEST_CASE("diffusion-friction relation") {
    SUBCASE("zero temperature") {
        const Pipeline pl = build_pipeline(test::small_config());
        CHECK(dsgs_residual(pl.trace.stat, pl.cfg) < 1e-3);
    }
    SUBCASE("k_B T = 10 hbar Omega") {
        Config cfg = test::small_config();
        cfg.phys.temperature = 10.0 * cfg.phys.hbar * cfg.phys.trap_frequency /
                               cfg.phys.boltzmann;
        const Pipeline pl = build_pipeline(cfg);
        CHECK(dsgs_residual(pl.trace.stat, cfg) < 1e-3);
    }
    SUBCASE("high-temperature Kubo ratio") {
        Config cfg = test::small_config();
        cfg.phys.temperature = 10.0; // hbar W / kB T = 0.025
        const Pipeline pl = build_pipeline(cfg);
        const auto& s = pl.trace.stat;
        const double kubo = 2.0 * cfg.phys.mirror_mass * cfg.phys.boltzmann *
                            cfg.phys.temperature / cfg.phys.hbar;
        CHECK(s.d_pp_s / s.gamma_s == doctest::Approx(kubo).epsilon(0.02));
    }
    SUBCASE("residual insensitive to coupling rescaling") {
        Config c1 = test::small_config();
        Config c2 = test::small_config();
        c2.phys.coupling *= 1.3;
        const double r1 = dsgs_residual(build_pipeline(c1).trace.stat, c1);
        const double r2 = dsgs_residual(build_pipeline(c2).trace.stat, c2);
        CHECK(r1 < 1e-3);
        CHECK(r2 < 1e-3);
    }
}

TEST_CASE("whole-spectrum sensitivity of the cross coefficient") {
    // Truncating the band shifts D_XP (a principal-value integral over the
    // full spectrum) while the on-shell values Gamma^s, D_PP^s stay put.
    Config full = test::small_config();
    Config cut = test::small_config();
    cut.grid.freq_cutoff = 6.0;
    cut.grid.freq_samples = 384; // same resolution, smaller band
    const Pipeline a = build_pipeline(full);
    const Pipeline b = build_pipeline(cut);

    const double d_pp_shift =
        std::abs(b.trace.stat.d_pp_s / a.trace.stat.d_pp_s - 1.0);
    const double gamma_shift =
        std::abs(b.trace.stat.gamma_s / a.trace.stat.gamma_s - 1.0);
    const double d_xp_shift = std::abs(b.trace.d_xp.back() / a.trace.d_xp.back() - 1.0);

    CHECK(d_pp_shift < 5e-3);
    CHECK(gamma_shift < 5e-3);
    CHECK(d_xp_shift > 5.0 * std::max(d_pp_shift, gamma_shift));
}

TEST_CASE("interpolation guard") {
    const Pipeline pl = build_pipeline(test::small_config());
    Config cfg = pl.cfg;
    cfg.phys.trap_frequency = 100.0; // outside the band
    CHECK_THROWS_AS(stationary_limits(pl.mirror, cfg), PhysicsError);
}

TEST_CASE("decoupled limit: zero coefficients") {
    Config cfg = test::small_config();
    cfg.phys.coupling = 0.0;
    const Pipeline pl = build_pipeline(cfg);
    for (std::size_t i = 0; i < pl.trace.t.size(); ++i) {
        CHECK(pl.trace.gamma[i] == 0.0);
        CHECK(pl.trace.d_pp[i] == 0.0);
        CHECK(pl.trace.d_xp[i] == 0.0);
        CHECK(pl.trace.domega2_sq[i] == 0.0);
    }
    CHECK(pl.trace.stat.gamma_s == 0.0);
    CHECK(pl.trace.stat.d_pp_s == 0.0);
    CHECK(dsgs_residual(pl.trace.stat, cfg) == 0.0);
}
