#include "rftpi/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rftpi/errors.hpp"

namespace rftpi {

void CorrelationTrace::validate() const {
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
    if (taus.size() != values.size())
        throw std::invalid_argument("taus and values length mismatch");
    if (taus.size() < 2) throw std::invalid_argument("trace needs at least two bins");
    for (std::size_t i = 1; i < taus.size(); ++i) {
        const double step = taus[i] - taus[i - 1];
        if (!(step > 0.0)) throw std::invalid_argument("taus must be strictly increasing");
        if (std::abs(step - bin_width) > 1e-9 * bin_width)
            throw std::invalid_argument("taus must be uniformly spaced at bin_width");
    }
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("trace values must be non-negative");
}

void HomParams::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(m)) throw std::invalid_argument("m must lie in [0, 1]");
    if (!in01(p0)) throw std::invalid_argument("p0 must lie in [0, 1]");
    if (!in01(x)) throw std::invalid_argument("x must lie in [0, 1]");
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    if (!(t_laser_coh > 0.0)) throw std::invalid_argument("t_laser_coh must be > 0");
    if (detector_fwhm < 0.0) throw std::invalid_argument("detector_fwhm must be >= 0");
}

AutoCorrelation AutoCorrelation::parametric(double g2_zero, double tau_dip_ns) {
    if (g2_zero < 0.0) throw NegativeInput("g2(0) must be >= 0");
    if (!(tau_dip_ns > 0.0)) throw std::invalid_argument("tau_dip must be > 0");
    AutoCorrelation a;
    a.eval_ = [g2_zero, tau_dip_ns](double tau_ns) {
        return 1.0 - (1.0 - g2_zero) * std::exp(-std::abs(tau_ns) / tau_dip_ns);
    };
    return a;
}

AutoCorrelation AutoCorrelation::tabulated(CorrelationTrace trace) {
    trace.validate();
    AutoCorrelation a;
    a.trace_ = std::make_shared<const CorrelationTrace>(std::move(trace));
    auto tr = a.trace_;
    // even in tau; linear interpolation, clamped to the last bin outside range
    a.eval_ = [tr](double tau_ns) {
        const double tau_ps = std::abs(ps_from_ns(tau_ns));
        const auto& taus = tr->taus;
        const auto& vals = tr->values;
        if (tau_ps <= taus.front()) return vals.front();
        if (tau_ps >= taus.back()) return vals.back();
        const auto it = std::upper_bound(taus.begin(), taus.end(), tau_ps);
        const std::size_t hi = static_cast<std::size_t>(it - taus.begin());
        const double w = (tau_ps - taus[hi - 1]) / (taus[hi] - taus[hi - 1]);
        return (1.0 - w) * vals[hi - 1] + w * vals[hi];
    };
    return a;
}

AutoCorrelation AutoCorrelation::constant(double value) {
    if (value < 0.0) throw NegativeInput("g2 must be >= 0");
    AutoCorrelation a;
    a.eval_ = [value](double) { return value; };
    return a;
}

const CorrelationTrace& AutoCorrelation::trace() const {
    if (!trace_) throw std::logic_error("auto-correlation is not tabulated");
    return *trace_;
}

double g2_hom_single_photon(double m, double delta_ghz, double tau_ns) {
    if (m < 0.0 || m > 1.0) throw std::invalid_argument("m must lie in [0, 1]");
    return 0.5 * (1.0 - m * std::cos(two_pi * delta_ghz * tau_ns));
}

double g2_hom_steady(double m, double p0, double delta_ghz, double tau_ns) {
    return 1.0 - 0.5 * m * p0 * p0 * std::cos(two_pi * delta_ghz * tau_ns);
}

double g2_hom_full(const AutoCorrelation& auto_corr, double m, double p0,
                   double delta_ghz, double tau_ns, double t_laser_coh_ns) {
    const double g2 = auto_corr(tau_ns);
    const double env = std::exp(-std::abs(tau_ns) / t_laser_coh_ns);
    const double c = std::cos(two_pi * delta_ghz * tau_ns);
    const double steady = 1.0 - 0.5 * m * p0 * p0 * c * env;
    const double single = 0.5 * (1.0 - m * c * env);
    return g2 * steady + (1.0 - g2) * single;
}

double visibility(double g2_perp, double g2_par) {
    if (!(g2_perp > 0.0)) throw DivisionDomain("visibility requires g2_perp > 0");
    return (g2_perp - g2_par) / g2_perp;
}

std::vector<double> convolve_gaussian(const std::function<double(double)>& model_ns,
                                      const std::vector<double>& tau_grid_ps,
                                      double fwhm_ps, double oversample_step_ps) {
    std::vector<double> out(tau_grid_ps.size());
    if (fwhm_ps <= 0.0) {
        for (std::size_t i = 0; i < tau_grid_ps.size(); ++i)
            out[i] = model_ns(ns_from_ps(tau_grid_ps[i]));
        return out;
    }
    const double sigma = fwhm_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double half_support = 4.0 * sigma;
    const auto n_half = static_cast<long>(std::ceil(half_support / oversample_step_ps));

    // discrete unit-sum kernel on the oversampled grid
    std::vector<double> kernel(static_cast<std::size_t>(2 * n_half + 1));
    double ksum = 0.0;
    for (long k = -n_half; k <= n_half; ++k) {
        const double u = static_cast<double>(k) * oversample_step_ps / sigma;
        const double w = std::exp(-0.5 * u * u);
        kernel[static_cast<std::size_t>(k + n_half)] = w;
        ksum += w;
    }
    for (double& w : kernel) w /= ksum;

    for (std::size_t i = 0; i < tau_grid_ps.size(); ++i) {
        double acc = 0.0;
        for (long k = -n_half; k <= n_half; ++k) {
            const double tau_ps = tau_grid_ps[i] - static_cast<double>(k) * oversample_step_ps;
            acc += kernel[static_cast<std::size_t>(k + n_half)] * model_ns(ns_from_ps(tau_ps));
        }
        out[i] = acc;
    }
    return out;
}

CorrelationTrace g2_hom_measured_model(const AutoCorrelation& auto_corr,
                                       const HomParams& hp,
                                       const std::vector<double>& tau_grid_ps) {
    hp.validate();
    if (tau_grid_ps.size() < 2)
        throw std::invalid_argument("tau grid needs at least two points");
    const double bin_width = tau_grid_ps[1] - tau_grid_ps[0];
    if (hp.detector_fwhm > 0.0 && bin_width > hp.detector_fwhm)
        throw GridTooCoarse("bin width exceeds detector FWHM");

    auto model = [&](double tau_ns) {
        const double full = g2_hom_full(auto_corr, hp.m, hp.p0, hp.delta, tau_ns,
                                        hp.t_laser_coh);
        return hp.x * auto_corr(tau_ns) + (1.0 - hp.x) * full;
    };

    const double step = std::min(bin_width, hp.detector_fwhm > 0.0
                                                ? hp.detector_fwhm / 4.0
                                                : bin_width) / 4.0;

    CorrelationTrace trace;
    trace.bin_width = bin_width;
    trace.taus = tau_grid_ps;
    trace.values = convolve_gaussian(model, tau_grid_ps, hp.detector_fwhm, step);
    const double tau_max = tau_grid_ps.back();
    trace.normalization_window = (tau_max >= 4.0e5)
                                     ? std::pair<double, double>{2.0e5, 4.0e5}
                                     : std::pair<double, double>{0.8 * tau_max, tau_max};
    return trace;
}

AutoCorrelation combine_hbt_geometric(const AutoCorrelation& g2_plus,
                                      const AutoCorrelation& g2_minus) {
    if (g2_plus.is_tabulated() != g2_minus.is_tabulated())
        throw std::invalid_argument("mixed tabulated/parametric combination");
    if (g2_plus.is_tabulated()) {
        const CorrelationTrace& a = g2_plus.trace();
        const CorrelationTrace& b = g2_minus.trace();
        if (a.taus.size() != b.taus.size() ||
            std::abs(a.bin_width - b.bin_width) > 1e-9 * a.bin_width ||
            std::abs(a.taus.front() - b.taus.front()) > 1e-9)
            throw std::invalid_argument("tabulated inputs on different grids");
        CorrelationTrace out = a;
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            if (a.values[i] < 0.0 || b.values[i] < 0.0)
                throw NegativeInput("geometric mean of negative values");
            out.values[i] = std::sqrt(a.values[i] * b.values[i]);
        }
        return AutoCorrelation::tabulated(std::move(out));
    }
    AutoCorrelation out;
    auto pa = g2_plus.eval_;
    auto pb = g2_minus.eval_;
    out.eval_ = [pa, pb](double tau_ns) {
        const double a = pa(tau_ns);
        const double b = pb(tau_ns);
        if (a < 0.0 || b < 0.0) throw NegativeInput("geometric mean of negative values");
        return std::sqrt(a * b);
    };
    return out;
}

double g2_hom_side_feature(const AutoCorrelation& auto_corr, double tau_local_ns,
                           double t_amzi_ns) {
    // Four uncorrelated source-time pairings contribute equally around the
    // +-t_amzi feature.
    return 0.25 * (auto_corr(t_amzi_ns + tau_local_ns) + auto_corr(2.0 * t_amzi_ns) +
                   auto_corr(t_amzi_ns - tau_local_ns) + auto_corr(tau_local_ns));
}

}  // namespace rftpi
