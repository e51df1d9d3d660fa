#include "rftpi/fock_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "rftpi/errors.hpp"
#include "rftpi/units.hpp"

namespace rftpi {

namespace {

using cd = std::complex<double>;
using Amp16 = std::array<cd, 16>;

// Annihilate one mode (0..3, mode 0 = highest bit) across the 16 amplitudes.
Amp16 annihilate(const Amp16& in, int mode) {
    Amp16 out{};
    const int bit = 1 << (3 - mode);
    for (int i = 0; i < 16; ++i) {
        if (i & bit) out[i & ~bit] += in[i];
    }
    return out;
}

double norm2(const Amp16& a) {
    double s = 0.0;
    for (const cd& v : a) s += std::norm(v);
    return s;
}

cd phase_factor(double nu_ghz, double time_ns) {
    const double arg = -two_pi * nu_ghz * time_ns;
    return {std::cos(arg), std::sin(arg)};
}

using Rho = Eigen::Matrix2cd;

Rho lindblad_rhs(const LindbladSpec& s, const Rho& rho) {
    // Basis {|g>, |e>}; sigma = |g><e|.
    Rho sigma = Rho::Zero();
    sigma(0, 1) = 1.0;
    const Rho sigma_dag = sigma.adjoint();
    Rho sz = Rho::Zero();
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;  // |e><e| - |g><g|

    const cd i(0.0, 1.0);
    const cd eip = std::exp(i * s.phi);
    const Rho h = -(s.omega / 2.0) * (std::conj(eip) * sigma_dag + eip * sigma) +
                  (s.delta / 2.0) * sz;

    auto dissipator = [](double rate, const Rho& op, const Rho& r) -> Rho {
        const Rho od_o = op.adjoint() * op;
        return rate * (op * r * op.adjoint() - 0.5 * (od_o * r + r * od_o));
    };

    return -i * (h * rho - rho * h) + dissipator(s.gamma_par, sigma, rho) +
           dissipator(s.gamma_star / 2.0, sz, rho);
}

AtomState to_atom_state(const Rho& rho) {
    AtomState s;
    s.rho_gg = rho(0, 0).real();
    s.rho_ee = rho(1, 1).real();
    s.rho_ge = rho(0, 1);
    return s;
}

}  // namespace

double FourModeState::norm2() const { return rftpi::norm2(amp); }

FourModeState build_input_state(double p0, double p1, double nu_a_ghz, double nu_b_ghz,
                                double t_ns, double tau_ns) {
    if (p0 < 0.0 || p1 < 0.0 || std::abs(p0 + p1 - 1.0) > 1e-12)
        throw NormalizationError("weights must be non-negative with p0 + p1 = 1");

    const std::array<std::pair<double, double>, 4> modes = {{
        {nu_a_ghz, t_ns},
        {nu_a_ghz, t_ns + tau_ns},
        {nu_b_ghz, t_ns},
        {nu_b_ghz, t_ns + tau_ns},
    }};

    const double a0 = std::sqrt(p0);
    const double a1 = std::sqrt(p1);

    FourModeState st;
    for (int idx = 0; idx < 16; ++idx) {
        cd amp(1.0, 0.0);
        for (int m = 0; m < 4; ++m) {
            const bool occupied = idx & (1 << (3 - m));
            amp *= occupied ? a1 * phase_factor(modes[m].first, modes[m].second) : cd(a0, 0.0);
        }
        st.amp[idx] = amp;
    }
    return st;
}

double coincidence_probability(const FourModeState& state) {
    // c_t d_{t+tau} = (1/2)(a_t a_{t+tau} - a_t b_{t+tau} + a_{t+tau} b_t - b_t b_{t+tau}).
    // The aa and bb branches ride on uncorrelated global phases; only the
    // cross-port pair interferes.
    const Amp16 aa = annihilate(annihilate(state.amp, 0), 1);
    const Amp16 bb = annihilate(annihilate(state.amp, 2), 3);

    Amp16 cross = annihilate(annihilate(state.amp, 2), 1);  // +a_{t+tau} b_t
    const Amp16 ab = annihilate(annihilate(state.amp, 0), 3);
    for (int i = 0; i < 16; ++i) cross[i] -= ab[i];  // -a_t b_{t+tau}

    return 0.25 * (norm2(aa) + norm2(bb) + norm2(cross));
}

double hom_normalized_from_oracle(double p0, double p1, double delta_ghz, double tau_ns) {
    if (!(p1 > 0.0)) throw DivisionDomain("hom_normalized_from_oracle requires p1 > 0");
    const double nu0 = 0.0;  // absolute carrier drops out; tested explicitly
    const FourModeState st = build_input_state(p0, p1, nu0 - delta_ghz / 2.0,
                                               nu0 + delta_ghz / 2.0, 0.0, tau_ns);
    return coincidence_probability(st) / (p1 * p1);
}

LindbladSpec LindbladSpec::from_params(const EmitterParams& e, const DriveParams& d) {
    LindbladSpec s;
    s.omega = d.omega;
    s.delta = d.delta_angular();
    s.gamma_par = e.gamma_par;
    s.gamma_star = e.gamma_star;
    return s;
}

EvolveResult lindblad_evolve(const LindbladSpec& spec, const AtomState& initial,
                             double t_end_ns, double dt_ns,
                             const std::vector<double>& record_times) {
    if (spec.gamma_par < 0.0 || spec.gamma_star < 0.0)
        throw std::invalid_argument("rates must be non-negative");
    double dt_max = 0.01 / spec.gamma_par;
    if (spec.omega > 0.0) dt_max = std::min(dt_max, 0.01 / spec.omega);
    if (dt_ns > dt_max)
        throw StepTooLarge("dt exceeds 0.01 * min(1/gamma_par, 1/omega)");

    Rho rho;
    rho << cd(initial.rho_gg, 0.0), initial.rho_ge, std::conj(initial.rho_ge),
        cd(initial.rho_ee, 0.0);

    EvolveResult out;
    std::size_t next_record = 0;
    auto maybe_record = [&](double t) {
        while (next_record < record_times.size() && record_times[next_record] <= t + 1e-15) {
            out.trajectory.emplace_back(t, to_atom_state(rho));
            ++next_record;
        }
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end_ns / dt_ns));
    const double h = t_end_ns / static_cast<double>(n_steps);
    maybe_record(0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Rho k1 = lindblad_rhs(spec, rho);
        const Rho k2 = lindblad_rhs(spec, rho + 0.5 * h * k1);
        const Rho k3 = lindblad_rhs(spec, rho + 0.5 * h * k2);
        const Rho k4 = lindblad_rhs(spec, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double trace_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        out.max_trace_error = std::max(out.max_trace_error, trace_err);
        maybe_record(static_cast<double>(k + 1) * h);
    }
    out.steps = n_steps;
    out.final_state = to_atom_state(rho);
    return out;
}

PurityCheck joint_purity_check(const EmitterParams& e, const DriveParams& d) {
    if (e.gamma_star > 0.0)
        throw NonZeroDephasing("purity check requires zero pure dephasing");

    const double gp = e.gamma_par;
    const double delta = d.delta_angular();
    const double om = d.omega;
    const double denom = gp * gp + 4.0 * delta * delta + 2.0 * om * om;

    // Basis ordering {|g0>, |g1>, |e0>}.
    Eigen::Matrix3cd rho;
    const cd od(gp, 2.0 * delta);
    rho << cd(gp * gp + 4.0 * delta * delta, 0.0), od * om, od * om,
        std::conj(od) * om, cd(om * om, 0.0), cd(om * om, 0.0),
        std::conj(od) * om, cd(om * om, 0.0), cd(om * om, 0.0);
    rho /= denom;

    const JointPureState j = joint_state(e, d);
    const double theta_prime = std::atan(2.0 * delta / gp);
    const cd ph = std::exp(cd(0.0, -theta_prime));
    Eigen::Vector3cd psi;
    psi << cd(std::sqrt(j.p0), 0.0), std::sqrt(j.p1 / 2.0) * ph, std::sqrt(j.p1 / 2.0) * ph;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(rho);
    PurityCheck pc;
    pc.max_eigenvalue = es.eigenvalues().maxCoeff();
    pc.residual = (rho - psi * psi.adjoint()).norm();
    return pc;
}

}  // namespace rftpi
