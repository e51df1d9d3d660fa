#include <doctest.h>

#include <cmath>
#include <random>

#include "rftpi/errors.hpp"
#include "rftpi/fock_oracle.hpp"
#include "rftpi/interference.hpp"

using namespace rftpi;

namespace {

EmitterParams emitter(double gamma_par, double gamma_star = 0.0) {
    EmitterParams e;
    e.gamma_par = gamma_par;
    e.t1 = 1.0 / gamma_par;
    e.gamma_star = gamma_star;
    return e;
}

DriveParams drive_angular(double omega, double delta_angular) {
    DriveParams d;
    d.omega = omega;
    d.delta = cyclic_from_angular(delta_angular);
    return d;
}

}  // namespace

TEST_CASE("input state construction") {
    SUBCASE("p1 = 0 puts all weight on vacuum") {
        const FourModeState s = build_input_state(1.0, 0.0, 1.0, 2.0, 0.3, 0.7);
        CHECK(std::abs(s.amp[0]) == doctest::Approx(1.0));
        CHECK(s.norm2() == doctest::Approx(1.0));
    }
    SUBCASE("p0 = 0 puts modulus 1 on |1111>") {
        const FourModeState s = build_input_state(0.0, 1.0, 1.0, 2.0, 0.3, 0.7);
        CHECK(std::abs(s.amp[15]) == doctest::Approx(1.0));
    }
    SUBCASE("balanced weights give 16 amplitudes of modulus 1/4") {
        const FourModeState s = build_input_state(0.5, 0.5, 1.0, 2.0, 0.3, 0.7);
        for (const auto& a : s.amp) CHECK(std::abs(a) == doctest::Approx(0.25));
        CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("invalid weights rejected") {
        CHECK_THROWS_AS(build_input_state(0.7, 0.7, 1.0, 2.0, 0.0, 0.0),
                        NormalizationError);
    }
}

TEST_CASE("coincidence probability closed form") {
    SUBCASE("vacuum never coincides") {
        CHECK(coincidence_probability(build_input_state(1.0, 0.0, 1.0, 2.0, 0.0, 1.0)) ==
              doctest::Approx(0.0));
    }
    SUBCASE("pure one-photon streams") {
        const double p = coincidence_probability(build_input_state(0.0, 1.0, 0.5, 1.5, 0.0, 0.35));
        CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("balanced weights at zero delay") {
        const double p = coincidence_probability(build_input_state(0.5, 0.5, 0.5, 1.5, 0.0, 0.0));
        CHECK(p == doctest::Approx(0.21875).epsilon(1e-12));
    }
    SUBCASE("two-detector probability never exceeds 1") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const double p0 = u(rng);
            const double p = coincidence_probability(
                build_input_state(p0, 1.0 - p0, u(rng), u(rng) + 1.0, u(rng), 3.0 * u(rng)));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("oracle matches the steady-state closed form on the spec grid") {
    double worst = 0.0;
    for (int ip = 0; ip <= 10; ++ip) {
        const double p0 = 0.1 * ip;
        if (p0 >= 1.0) continue;
        for (int it = 0; it <= 40; ++it) {
            const double dtau = 0.05 * it;
            const double oracle = hom_normalized_from_oracle(p0, 1.0 - p0, 1.0, dtau);
            const double analytic = g2_hom_steady(1.0, p0, 1.0, dtau);
            worst = std::max(worst, std::abs(oracle - analytic));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("oracle examples") {
    CHECK(hom_normalized_from_oracle(0.92, 0.08, 1.0, 0.0) ==
          doctest::Approx(0.5768).epsilon(1e-10));
    CHECK(hom_normalized_from_oracle(0.0, 1.0, 1.0, 0.7) == doctest::Approx(1.0));
    // p0 -> 1 limit at half-integer detuning-delay product approaches 3/2
    CHECK(hom_normalized_from_oracle(1.0 - 1e-6, 1e-6, 1.0, 0.5) ==
          doctest::Approx(1.5).epsilon(1e-5));
    CHECK_THROWS_AS(hom_normalized_from_oracle(1.0, 0.0, 1.0, 0.0), DivisionDomain);
}

TEST_CASE("coincidence probability is invariant under absolute-time shifts") {
    for (const double t : {0.0, 0.17, 3.6, 120.0}) {
        const double p = coincidence_probability(build_input_state(0.7, 0.3, 1.3, 2.3, t, 0.41));
        const double p0 = coincidence_probability(build_input_state(0.7, 0.3, 1.3, 2.3, 0.0, 0.41));
        CHECK(p == doctest::Approx(p0).epsilon(1e-12));
    }
}

TEST_CASE("lindblad evolution") {
    SUBCASE("no drive from the ground state stays put") {
        LindbladSpec spec;
        spec.gamma_par = 1.0;
        const EvolveResult r = lindblad_evolve(spec, AtomState{}, 10.0, 0.005, {0.0, 5.0});
        CHECK(r.final_state.rho_gg == doctest::Approx(1.0));
        CHECK(r.trajectory.size() == 2);
        CHECK(r.max_trace_error <= 1e-10);
    }
    SUBCASE("resonant drive reaches the analytic steady state") {
        const EmitterParams e = emitter(1.0);
        const DriveParams d = drive_angular(1.0, 0.0);
        const EvolveResult r = lindblad_evolve(LindbladSpec::from_params(e, d), AtomState{},
                                               50.0, 0.005);
        CHECK(std::abs(r.final_state.rho_ee - 1.0 / 3.0) <= 1e-8);
    }
    SUBCASE("strong dephasing matches the analytic coherence") {
        const EmitterParams e = emitter(1.0, 50.0);
        const DriveParams d = drive_angular(1.0, 0.5);
        const AtomState target = steady_state(e, d);
        const EvolveResult r = lindblad_evolve(LindbladSpec::from_params(e, d), AtomState{},
                                               50.0, 0.0002);
        CHECK(std::abs(r.final_state.rho_ge - target.rho_ge) <= 1e-8);
    }
    SUBCASE("step-size precondition enforced") {
        LindbladSpec spec;
        spec.gamma_par = 1.0;
        spec.omega = 10.0;
        CHECK_THROWS_AS(lindblad_evolve(spec, AtomState{}, 1.0, 0.005), StepTooLarge);
    }
    SUBCASE("fourth-order convergence: halving dt gains >= 8x") {
        const EmitterParams e = emitter(1.0);
        const DriveParams d = drive_angular(1.0, 0.0);
        const LindbladSpec spec = LindbladSpec::from_params(e, d);
        const AtomState exact = steady_state(e, d);
        // compare at a finite time where the transient is still visible
        auto err_at = [&](double dt) {
            const EvolveResult r = lindblad_evolve(spec, AtomState{}, 2.0, dt);
            // reference trajectory at very fine step
            const EvolveResult ref = lindblad_evolve(spec, AtomState{}, 2.0, dt / 64.0);
            return std::abs(r.final_state.rho_ee - ref.final_state.rho_ee) +
                   std::abs(r.final_state.rho_ge - ref.final_state.rho_ge);
        };
        (void)exact;
        const double e1 = err_at(0.008);
        const double e2 = err_at(0.004);
        CHECK(e1 / e2 >= 8.0);
    }
}

TEST_CASE("joint purity") {
    SUBCASE("random parameter sets stay rank-1") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const PurityCheck pc = joint_purity_check(
                emitter(0.5 + 4.5 * u(rng)), drive_angular(5.0 * u(rng), -5.0 + 10.0 * u(rng)));
            CHECK(std::abs(pc.max_eigenvalue - 1.0) <= 1e-10);
            CHECK(pc.residual <= 1e-10);
        }
    }
    SUBCASE("undriven matrix is the ground-state projector") {
        const PurityCheck pc = joint_purity_check(emitter(1.0), drive_angular(0.0, 0.0));
        CHECK(pc.max_eigenvalue == doctest::Approx(1.0));
        CHECK(pc.residual <= 1e-12);
    }
    SUBCASE("dephasing rejected") {
        CHECK_THROWS_AS(joint_purity_check(emitter(1.0, 0.1), drive_angular(1.0, 0.0)),
                        NonZeroDephasing);
    }
}
