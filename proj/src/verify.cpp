#include "rftpi/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "rftpi/emitter.hpp"
#include "rftpi/fock_oracle.hpp"
#include "rftpi/interference.hpp"

namespace rftpi {

namespace {

std::string fmt_case(const char* fmt, double a, double b, double c = 0.0, double d = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}

}  // namespace

SuiteReport run_oracle_equivalence_suite() {
    SuiteReport rep;
    rep.name = "oracle-equivalence";
    rep.tolerance = 1e-10;
    const double delta_ghz = 1.0;
    for (int ip = 0; ip <= 10; ++ip) {
        const double p0 = 0.1 * ip;
        const double p1 = 1.0 - p0;
        if (!(p1 > 0.0)) continue;  // p1 = 0 has no normalized correlation
        for (int it = 0; it <= 40; ++it) {
            const double dtau = 0.05 * it;
            const double oracle =
                hom_normalized_from_oracle(p0, p1, delta_ghz, dtau / delta_ghz);
            const double analytic = g2_hom_steady(1.0, p0, delta_ghz, dtau / delta_ghz);
            const double err = std::abs(oracle - analytic);
            if (err > rep.max_error) {
                rep.max_error = err;
                rep.worst_case = fmt_case("p0=%.2f dtau=%.2f", p0, dtau);
            }
        }
    }
    rep.pass = rep.max_error <= rep.tolerance;
    return rep;
}

SuiteReport run_steady_state_suite(std::uint64_t seed, int n_sets) {
    SuiteReport rep;
    rep.name = "steady-state";
    rep.tolerance = 1e-8;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < n_sets; ++k) {
        const double gpar = 0.5 + 4.5 * u01(rng);
        const double gstar = 2.0 * u01(rng);
        const double delta_ang = -5.0 + 10.0 * u01(rng);
        const double omega = 5.0 * u01(rng);

        EmitterParams e;
        e.gamma_par = gpar;
        e.t1 = 1.0 / gpar;
        e.gamma_star = gstar;
        DriveParams d;
        d.omega = omega;
        d.delta = cyclic_from_angular(delta_ang);

        const AtomState analytic = steady_state(e, d);

        AtomState ground;
        const double dt = 0.01 / std::max(gpar, omega > 0.0 ? omega : gpar);
        const EvolveResult ev =
            lindblad_evolve(LindbladSpec::from_params(e, d), ground, 50.0 / gpar, dt);

        const double err = std::max(
            {std::abs(ev.final_state.rho_gg - analytic.rho_gg),
             std::abs(ev.final_state.rho_ee - analytic.rho_ee),
             std::abs(ev.final_state.rho_ge.real() - analytic.rho_ge.real()),
             std::abs(ev.final_state.rho_ge.imag() - analytic.rho_ge.imag())});
        if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_case = fmt_case("gpar=%.3f gstar=%.3f delta=%.3f omega=%.3f", gpar,
                                      gstar, delta_ang, omega);
        }
    }
    rep.pass = rep.max_error <= rep.tolerance;
    return rep;
}

SuiteReport run_purity_suite(std::uint64_t seed, int n_sets) {
    SuiteReport rep;
    rep.name = "joint-purity";
    rep.tolerance = 1e-10;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < n_sets; ++k) {
        const double gpar = 0.5 + 4.5 * u01(rng);
        const double delta_ang = -5.0 + 10.0 * u01(rng);
        const double omega = 5.0 * u01(rng);

        EmitterParams e;
        e.gamma_par = gpar;
        e.t1 = 1.0 / gpar;
        DriveParams d;
        d.omega = omega;
        d.delta = cyclic_from_angular(delta_ang);

        const PurityCheck pc = joint_purity_check(e, d);
        const double err = std::max(pc.residual, std::abs(pc.max_eigenvalue - 1.0));
        if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_case =
                fmt_case("gpar=%.3f delta=%.3f omega=%.3f", gpar, delta_ang, omega);
        }
    }
    rep.pass = rep.max_error <= rep.tolerance;
    return rep;
}

SuiteReport run_limit_reduction_suite(std::uint64_t seed, int n_triples) {
    SuiteReport rep;
    rep.name = "limit-reductions";
    rep.tolerance = 1e-12;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const AutoCorrelation unity = AutoCorrelation::constant(1.0);
    const AutoCorrelation zero = AutoCorrelation::constant(0.0);
    const double t_coh = 1e18;  // envelope off
    for (int k = 0; k < n_triples; ++k) {
        const double m = u01(rng);
        const double p0 = u01(rng);
        const double dtau = 2.0 * u01(rng);
        const double delta_ghz = 1.0;
        const double tau = dtau / delta_ghz;

        const double full_hi = g2_hom_full(unity, m, p0, delta_ghz, tau, t_coh);
        const double full_lo = g2_hom_full(zero, m, p0, delta_ghz, tau, t_coh);
        const double err =
            std::max(std::abs(full_hi - g2_hom_steady(m, p0, delta_ghz, tau)),
                     std::abs(full_lo - g2_hom_single_photon(m, delta_ghz, tau)));
        if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_case = fmt_case("m=%.3f p0=%.3f dtau=%.3f", m, p0, dtau);
        }
    }
    rep.pass = rep.max_error <= rep.tolerance;
    return rep;
}

SuiteReport run_g1_identity_suite(std::uint64_t seed, int n_sets) {
    SuiteReport rep;
    rep.name = "g1-p0-identity";
    rep.tolerance = 1e-9;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < n_sets; ++k) {
        const double gpar = 0.5 + 4.5 * u01(rng);
        const double delta_ang = -5.0 + 10.0 * u01(rng);
        const double omega = 5.0 * u01(rng);

        EmitterParams e;
        e.gamma_par = gpar;
        e.t1 = 1.0 / gpar;
        DriveParams d;
        d.omega = omega;
        d.delta = cyclic_from_angular(delta_ang);

        const double g1 = g1_magnitude_steady(e, d);
        const double p0 = joint_state(e, d).p0;
        const double err = std::abs(g1 - p0) / std::max(p0, 1e-300);
        if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_case =
                fmt_case("gpar=%.3f delta=%.3f omega=%.3f", gpar, delta_ang, omega);
        }
    }
    rep.pass = rep.max_error <= rep.tolerance;
    return rep;
}

std::vector<SuiteReport> run_all_suites(std::uint64_t seed) {
    return {run_oracle_equivalence_suite(), run_steady_state_suite(seed),
            run_purity_suite(seed), run_limit_reduction_suite(seed),
            run_g1_identity_suite(seed)};
}

}  // namespace rftpi
