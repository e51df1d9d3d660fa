#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rftpi/emitter.hpp"

// Brute-force quantum oracles: a four-mode Fock-space beam-splitter
// coincidence calculation and a fixed-step Lindblad integrator. These exist
// to validate the closed-form results independently and never share code
// with the analytic paths they check.

namespace rftpi {

// Product state of four single-photon modes, occupation {0,1} each.
// Index convention: bit 3 = (a, t), bit 2 = (a, t+tau), bit 1 = (b, t),
// bit 0 = (b, t+tau).
struct FourModeState {
    std::array<std::complex<double>, 16> amp{};

    double norm2() const;
};

// Tensor product of four superpositions sqrt(p0)|0> + sqrt(p1) e^{-i2pi nu T}|1>
// with the (port, time) assignment above. Frequencies in GHz, times in ns.
FourModeState build_input_state(double p0, double p1, double nu_a_ghz, double nu_b_ghz,
                                double t_ns, double tau_ns);

// Two-detector coincidence probability behind a 50/50 splitter.
// Same-port double emissions carry uncorrelated global phases, so their
// probabilities add incoherently to the interfering cross-port pair.
double coincidence_probability(const FourModeState& state);

// coincidence_probability / p1^2; the oracle route to the steady-state HOM
// correlation at unit indistinguishability.
double hom_normalized_from_oracle(double p0, double p1, double delta_ghz, double tau_ns);

// Master-equation parameters, all angular (rad/ns). phi is the dipole phase.
struct LindbladSpec {
    double omega = 0.0;
    double delta = 0.0;
    double gamma_par = 0.0;
    double gamma_star = 0.0;
    double phi = std::numbers::pi / 2.0;

    static LindbladSpec from_params(const EmitterParams& e, const DriveParams& d);
};

struct EvolveResult {
    std::vector<std::pair<double, AtomState>> trajectory;
    AtomState final_state;
    std::size_t steps = 0;
    double max_trace_error = 0.0;
};

// Fixed-step RK4 integration of the Lindblad equation from `initial`.
// Requires dt <= 0.01 * min(1/gamma_par, 1/omega); throws StepTooLarge.
EvolveResult lindblad_evolve(const LindbladSpec& spec, const AtomState& initial,
                             double t_end_ns, double dt_ns,
                             const std::vector<double>& record_times = {});

struct PurityCheck {
    double max_eigenvalue = 0.0;
    double residual = 0.0;  // Frobenius distance to the rank-1 projector
};

// Assembles the 3x3 joint emitter-photon density matrix from parameters and
// measures how far it is from the pure-state outer product.
PurityCheck joint_purity_check(const EmitterParams& e, const DriveParams& d);

}  // namespace rftpi
