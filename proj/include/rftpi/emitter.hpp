#pragma once

#include <complex>
#include <optional>

#include "rftpi/units.hpp"

// Driven two-level emitter: analytic steady state, the joint emitter-photon
// pure state, coherent-fraction laws and device figures of merit.

namespace rftpi {

// Intrinsic emitter and device constants.
// gamma_par / gamma_star are angular rates (rad/ns); cavity figures are
// cyclic GHz as quoted on data sheets.
struct EmitterParams {
    double gamma_par = 0.0;     // radiative decay, rad/ns
    double gamma_star = 0.0;    // pure dephasing, rad/ns
    double t1 = 0.0;            // radiative lifetime, ns
    double fss = 0.0;           // fine-structure splitting, GHz (cyclic)
    double cavity_g = 0.0;      // emitter-cavity coupling, GHz (cyclic)
    double cavity_kappa = 0.0;  // cavity damping, GHz (cyclic)
    double gamma_bulk = 0.0;    // off-cavity decay, GHz (cyclic)

    double gamma_perp() const { return 0.5 * gamma_par + gamma_star; }

    // Build a consistent parameter set from the lifetime; gamma_par = 1/t1 in
    // angular units.
    static EmitterParams from_lifetime(double t1_ns, double gamma_star = 0.0);

    // Throws std::invalid_argument on violated invariants (including the
    // gamma_par <-> t1 consistency requirement).
    void validate() const;
};

// Laser drive description. omega is angular (rad/ns); delta is the cyclic
// laser detuning nu - nu0 in GHz, converted to angular internally.
struct DriveParams {
    double omega = 0.0;         // Rabi rate, rad/ns
    double delta = 0.0;         // detuning, GHz (cyclic)
    double nbar = 0.0;          // excitation flux (photons per lifetime)
    double eta_ab = 0.8696;     // absorption efficiency
    double nu = 0.0;            // absolute laser frequency, GHz (phase bookkeeping only)
    double t_laser_coh = 200.0; // mutual laser coherence time, ns

    double delta_angular() const { return angular_from_cyclic(delta); }

    void validate() const;
};

// Steady-state density matrix of the emitter alone.
struct AtomState {
    double rho_gg = 1.0;
    double rho_ee = 0.0;
    std::complex<double> rho_ge{0.0, 0.0};

    // trace, hermiticity and positivity checks (1e-12 slack)
    void validate() const;
};

// (p0, p1, theta, nu) of the joint emitter-photon pure state.
struct JointPureState {
    double p0 = 1.0;
    double p1 = 0.0;
    double theta = 0.0;  // rad
    double nu = 0.0;     // carrier frequency, GHz (cyclic)
};

struct SaturationWeights {
    double i_coh = 1.0;
    double i_incoh = 0.0;
    double s = 0.0;
};

struct DeviceFigures {
    double gamma_par_cyclic = 0.0;  // GHz
    double cooperativity = 0.0;
    double purcell = 0.0;
};

struct G1WindowValue {
    std::complex<double> value;
    bool window_ok = true;  // false when T1 << tau << T_L margins fail
};

// Closed-form steady state of the driven emitter.
AtomState steady_state(const EmitterParams& e, const DriveParams& d);

// Joint emitter-photon pure state; only defined for gamma_star = 0
// (throws NonZeroDephasing otherwise).
JointPureState joint_state(const EmitterParams& e, const DriveParams& d);

// Coherent fraction from excitation flux: p0 = 1/(1 + 2 eta_ab nbar).
std::pair<double, double> p0_from_flux(double nbar, double eta_ab);

// Coherent/incoherent spectral weights through the saturation parameter.
SaturationWeights saturation_weights(const EmitterParams& e, const DriveParams& d);

// |g1(inf)| of the steady-state field, valid for any dephasing.
double g1_magnitude_steady(const EmitterParams& e, const DriveParams& d);

// Windowed first-order coherence p0 exp(-i 2 pi nu tau); flags a violated
// T1 << tau << T_L window (factor-10 margins) without failing.
G1WindowValue g1_window(const JointPureState& state, double tau_ns,
                        std::optional<double> t1_ns = std::nullopt,
                        std::optional<double> t_laser_coh_ns = std::nullopt);

// Indistinguishability bound from a fringe measurement,
// M <= g1^2 (1 + 2 nbar)^2, clamped to [0, 1].
double m_bound_from_g1(double g1_mag, double nbar);

DeviceFigures device_figures(const EmitterParams& e);

}  // namespace rftpi
