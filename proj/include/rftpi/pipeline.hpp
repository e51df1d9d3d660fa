#pragma once

#include <string>
#include <vector>

#include "rftpi/config.hpp"
#include "rftpi/interference.hpp"

// Glue between RunConfig and the model layer: resolved parameters, the
// simulate trace set, and the flux/detuning sweep tables.

namespace rftpi {

// Auto-correlation at a given mutual detuning: g2(0) comes from the
// per-detuning table when present, otherwise the scalar default.
AutoCorrelation auto_from_config(const RunConfig& cfg, double delta_ghz);

// hom parameters resolved at a detuning; m_override < 0 keeps the configured m.
HomParams hom_from_config(const RunConfig& cfg, double delta_ghz, double m_override = -1.0);

double p0_from_config(const RunConfig& cfg);

struct SimulatedTraces {
    CorrelationTrace parallel;
    CorrelationTrace orthogonal;
    CorrelationTrace hbt;
    CorrelationTrace visibility;
};

// Model traces on the configured grid: parallel/orthogonal HOM, convolved
// HBT, and the pointwise TPI visibility.
SimulatedTraces simulate_traces(const RunConfig& cfg);

struct FluxRow {
    double nbar, p0, amplitude, g2_par_dip;
};
struct DetuningRow {
    double delta, g2_perp_0, g2_par_0, visibility_0;
};

std::vector<FluxRow> sweep_flux(const RunConfig& cfg, const std::vector<double>& nbars);
std::vector<DetuningRow> sweep_detuning(const RunConfig& cfg,
                                        const std::vector<double>& deltas);

std::string format_flux_table(const std::vector<FluxRow>& rows);
std::string format_detuning_table(const std::vector<DetuningRow>& rows);

}  // namespace rftpi
