#include "rftpi/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "rftpi/emitter.hpp"
#include "rftpi/errors.hpp"
#include "rftpi/trace_lab.hpp"

namespace rftpi {

namespace {

std::vector<double> config_grid_ps(const RunConfig& cfg) {
    std::vector<double> taus;
    const double lo = ps_from_ns(cfg.tau_min_ns);
    const double hi = ps_from_ns(cfg.tau_max_ns);
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / cfg.bin_width_ps + 0.5));
    taus.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        taus.push_back(lo + (static_cast<double>(i) + 0.5) * cfg.bin_width_ps);
    return taus;
}

// symmetric grid with a bin centered exactly at tau = 0
std::vector<double> zero_centered_grid_ps(double half_span_ps, double step_ps) {
    const auto n = static_cast<long>(std::ceil(half_span_ps / step_ps));
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(2 * n + 1));
    for (long k = -n; k <= n; ++k) taus.push_back(static_cast<double>(k) * step_ps);
    return taus;
}

double table_value(const std::vector<std::pair<double, double>>& points, double delta,
                   double fallback) {
    if (points.empty()) return fallback;
    if (points.size() == 1) return points.front().second;
    return interpolate_g2_zero(points)(delta);
}

}  // namespace

AutoCorrelation auto_from_config(const RunConfig& cfg, double delta_ghz) {
    const double g2_zero = table_value(cfg.g2_zero_points, delta_ghz, cfg.g2_zero);
    return AutoCorrelation::parametric(g2_zero, cfg.tau_dip_ns);
}

HomParams hom_from_config(const RunConfig& cfg, double delta_ghz, double m_override) {
    HomParams hp;
    hp.m = m_override >= 0.0 ? m_override : cfg.m;
    hp.p0 = p0_from_config(cfg);
    hp.delta = delta_ghz;
    hp.t_laser_coh = cfg.t_laser_coh_ns;
    hp.x = table_value(cfg.x_points, delta_ghz, cfg.x);
    hp.detector_fwhm = cfg.detector_fwhm_ps;
    hp.t_amzi = cfg.t_amzi_ns;
    return hp;
}

double p0_from_config(const RunConfig& cfg) {
    return p0_from_flux(cfg.nbar, cfg.eta_ab).first;
}

SimulatedTraces simulate_traces(const RunConfig& cfg) {
    const std::vector<double> grid = config_grid_ps(cfg);
    const AutoCorrelation auto_corr = auto_from_config(cfg, cfg.delta_ghz);

    const HomParams par = hom_from_config(cfg, cfg.delta_ghz);
    HomParams perp = par;
    perp.m = 0.0;
    HomParams hbt = par;
    hbt.x = 1.0;  // pure HBT limit of the measured model

    SimulatedTraces out;
    out.parallel = g2_hom_measured_model(auto_corr, par, grid);
    out.orthogonal = g2_hom_measured_model(auto_corr, perp, grid);
    out.hbt = g2_hom_measured_model(auto_corr, hbt, grid);

    out.visibility = out.parallel;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double perp_v = out.orthogonal.values[i];
        out.visibility.values[i] =
            perp_v > 0.0 ? visibility(perp_v, out.parallel.values[i]) : 0.0;
        if (out.visibility.values[i] < 0.0) out.visibility.values[i] = 0.0;
    }
    return out;
}

namespace {

// 0-delay value of the convolved measured model
double measured_model_at_zero(const AutoCorrelation& auto_corr, const HomParams& hp) {
    const double step = hp.detector_fwhm > 0.0 ? hp.detector_fwhm / 4.0 : 10.0;
    const std::vector<double> grid =
        zero_centered_grid_ps(std::max(4.0 * hp.detector_fwhm, 10.0 * step), step);
    const CorrelationTrace t = g2_hom_measured_model(auto_corr, hp, grid);
    return t.values[grid.size() / 2];
}

}  // namespace

std::vector<FluxRow> sweep_flux(const RunConfig& cfg, const std::vector<double>& nbars) {
    std::vector<FluxRow> rows;
    rows.reserve(nbars.size());
    const AutoCorrelation auto_corr = auto_from_config(cfg, cfg.delta_ghz);
    for (const double nbar : nbars) {
        RunConfig c = cfg;
        c.nbar = nbar;
        FluxRow row;
        row.nbar = nbar;
        row.p0 = p0_from_config(c);
        row.amplitude = 0.5 * c.m * row.p0 * row.p0;
        row.g2_par_dip = measured_model_at_zero(auto_corr, hom_from_config(c, c.delta_ghz));
        rows.push_back(row);
    }
    return rows;
}

std::vector<DetuningRow> sweep_detuning(const RunConfig& cfg,
                                        const std::vector<double>& deltas) {
    std::vector<DetuningRow> rows;
    rows.reserve(deltas.size());
    for (const double delta : deltas) {
        const AutoCorrelation auto_corr = auto_from_config(cfg, delta);
        const HomParams par = hom_from_config(cfg, delta);
        HomParams perp = par;
        perp.m = 0.0;

        DetuningRow row;
        row.delta = delta;
        row.g2_par_0 = measured_model_at_zero(auto_corr, par);
        row.g2_perp_0 = measured_model_at_zero(auto_corr, perp);
        row.visibility_0 = visibility(row.g2_perp_0, row.g2_par_0);
        rows.push_back(row);
    }
    return rows;
}

std::string format_flux_table(const std::vector<FluxRow>& rows) {
    std::string out = "# nbar\tp0\tamplitude\tg2_par_dip\n";
    char buf[128];
    for (const FluxRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g\t%.9g\t%.9g\t%.9g\n", r.nbar, r.p0,
                      r.amplitude, r.g2_par_dip);
        out += buf;
    }
    return out;
}

std::string format_detuning_table(const std::vector<DetuningRow>& rows) {
    std::string out = "# delta_ghz\tg2_perp_0\tg2_par_0\tvisibility_0\n";
    char buf[128];
    for (const DetuningRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g\t%.9g\t%.9g\t%.9g\n", r.delta, r.g2_perp_0,
                      r.g2_par_0, r.visibility_0);
        out += buf;
    }
    return out;
}

}  // namespace rftpi
