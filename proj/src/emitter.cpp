#include "rftpi/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rftpi/errors.hpp"

namespace rftpi {

namespace {

constexpr double kDenomFloor = 1e-300;

double checked_div(double num, double den) {
    if (std::abs(den) < kDenomFloor)
        throw std::domain_error("denominator underflow");
    return num / den;
}

}  // namespace

EmitterParams EmitterParams::from_lifetime(double t1_ns, double gamma_star) {
    EmitterParams e;
    e.t1 = t1_ns;
    e.gamma_par = 1.0 / t1_ns;  // angular: gamma_par = 2*pi * (1/(2*pi*T1))
    e.gamma_star = gamma_star;
    return e;
}

void EmitterParams::validate() const {
    if (!(gamma_par > 0.0)) throw std::invalid_argument("gamma_par must be > 0");
    if (gamma_star < 0.0) throw std::invalid_argument("gamma_star must be >= 0");
    if (!(t1 > 0.0)) throw std::invalid_argument("t1 must be > 0");
    if (std::abs(gamma_par * t1 - 1.0) > 1e-9)
        throw std::invalid_argument("gamma_par and t1 are inconsistent (need gamma_par = 1/t1)");
    if (!(gamma_perp() > 0.0)) throw std::invalid_argument("gamma_perp must be > 0");
}

void DriveParams::validate() const {
    if (omega < 0.0) throw std::invalid_argument("omega must be >= 0");
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (eta_ab < 0.0 || eta_ab > 1.0) throw std::invalid_argument("eta_ab must lie in [0, 1]");
    if (!(t_laser_coh > 0.0)) throw std::invalid_argument("t_laser_coh must be > 0");
}

void AtomState::validate() const {
    if (std::abs(rho_gg + rho_ee - 1.0) > 1e-12)
        throw std::invalid_argument("density matrix trace differs from 1");
    if (rho_gg * rho_ee - std::norm(rho_ge) < -1e-12)
        throw std::invalid_argument("density matrix not positive semidefinite");
}

AtomState steady_state(const EmitterParams& e, const DriveParams& d) {
    if (!(e.gamma_par > 0.0))
        throw std::invalid_argument("steady_state undefined for gamma_par <= 0");
    const double gp = e.gamma_par;
    const double gperp = e.gamma_perp();
    const double delta = d.delta_angular();
    const double om = d.omega;

    const double denom = 2.0 * gp * (gperp * gperp + delta * delta) + 2.0 * gperp * om * om;
    AtomState s;
    s.rho_gg = checked_div(2.0 * gp * (gperp * gperp + delta * delta) + gperp * om * om, denom);
    s.rho_ee = checked_div(gperp * om * om, denom);
    s.rho_ge = std::complex<double>(gp * gperp * om, gp * delta * om) / denom;
    return s;
}

JointPureState joint_state(const EmitterParams& e, const DriveParams& d) {
    if (e.gamma_star > 0.0)
        throw NonZeroDephasing("joint pure state requires zero pure dephasing");
    const double gp = e.gamma_par;
    const double delta = d.delta_angular();
    const double om = d.omega;

    const double denom = gp * gp + 4.0 * delta * delta + 2.0 * om * om;
    JointPureState j;
    j.p0 = checked_div(gp * gp + 4.0 * delta * delta, denom);
    j.p1 = checked_div(2.0 * om * om, denom);
    j.theta = std::atan(2.0 * delta / gp) + std::numbers::pi / 2.0;
    j.nu = d.nu;
    return j;
}

std::pair<double, double> p0_from_flux(double nbar, double eta_ab) {
    if (nbar < 0.0) throw std::invalid_argument("nbar must be >= 0");
    if (eta_ab < 0.0 || eta_ab > 1.0) throw std::invalid_argument("eta_ab must lie in [0, 1]");
    const double p0 = 1.0 / (1.0 + 2.0 * eta_ab * nbar);
    return {p0, 1.0 - p0};
}

SaturationWeights saturation_weights(const EmitterParams& e, const DriveParams& d) {
    const double gp = e.gamma_par;
    const double delta = d.delta_angular();
    const double om = d.omega;

    SaturationWeights w;
    w.s = checked_div(2.0 * om * om / (gp * gp), 1.0 + (2.0 * delta / gp) * (2.0 * delta / gp));
    w.i_coh = 1.0 / (1.0 + w.s);
    w.i_incoh = w.s / (1.0 + w.s);
    return w;
}

double g1_magnitude_steady(const EmitterParams& e, const DriveParams& d) {
    const double gp = e.gamma_par;
    const double gperp = e.gamma_perp();
    const double delta = d.delta_angular();
    const double om = d.omega;

    const double lw = gperp * gperp + delta * delta;
    return checked_div(gp * gp * lw, 2.0 * gperp * (gp * lw + gperp * om * om));
}

G1WindowValue g1_window(const JointPureState& state, double tau_ns,
                        std::optional<double> t1_ns,
                        std::optional<double> t_laser_coh_ns) {
    G1WindowValue out;
    if (t1_ns && std::abs(tau_ns) < 10.0 * *t1_ns) out.window_ok = false;
    if (t_laser_coh_ns && std::abs(tau_ns) > 0.1 * *t_laser_coh_ns) out.window_ok = false;
    const double phase = -two_pi * state.nu * tau_ns;
    out.value = state.p0 * std::complex<double>(std::cos(phase), std::sin(phase));
    return out;
}

double m_bound_from_g1(double g1_mag, double nbar) {
    if (g1_mag < 0.0 || g1_mag > 1.0)
        throw std::invalid_argument("g1 magnitude must lie in [0, 1]");
    const double b = g1_mag * g1_mag * (1.0 + 2.0 * nbar) * (1.0 + 2.0 * nbar);
    return std::clamp(b, 0.0, 1.0);
}

DeviceFigures device_figures(const EmitterParams& e) {
    if (!(e.t1 > 0.0 && e.cavity_g > 0.0 && e.cavity_kappa > 0.0 && e.gamma_bulk > 0.0))
        throw std::invalid_argument("device_figures requires positive t1, g, kappa, gamma_bulk");
    DeviceFigures f;
    f.gamma_par_cyclic = 1.0 / (two_pi * e.t1);
    f.cooperativity = e.cavity_g * e.cavity_g / (e.cavity_kappa * e.gamma_bulk);
    f.purcell = 2.0 * f.cooperativity;
    return f;
}

}  // namespace rftpi
