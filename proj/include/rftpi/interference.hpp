#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "rftpi/units.hpp"

// Closed-form correlation observables: the two HOM limits, the bridged
// model, TPI visibility, the empirical measured-data model with detector
// convolution, and the HBT combiners used to feed it.

namespace rftpi {

// A sampled g(tau) curve. taus are uniformly spaced bin centers in ps.
struct CorrelationTrace {
    double bin_width = 0.0;                              // ps
    std::vector<double> taus;                            // ps
    std::vector<double> values;                          // dimensionless, >= 0
    std::pair<double, double> normalization_window{0, 0};  // ps

    void validate() const;
};

// Auto-correlation g2(tau), either the parametric fallback
// 1 - (1 - g2(0)) exp(-|tau|/tau_dip) or a tabulated (even-in-tau) trace.
class AutoCorrelation {
public:
    static AutoCorrelation parametric(double g2_zero, double tau_dip_ns);
    static AutoCorrelation tabulated(CorrelationTrace trace);
    // degenerate constant form, handy for limit checks
    static AutoCorrelation constant(double value);

    double operator()(double tau_ns) const { return eval_(tau_ns); }

    bool is_tabulated() const { return trace_ != nullptr; }
    double g2_zero() const { return (*this)(0.0); }
    const CorrelationTrace& trace() const;

    friend AutoCorrelation combine_hbt_geometric(const AutoCorrelation&,
                                                 const AutoCorrelation&);

private:
    AutoCorrelation() = default;
    std::function<double(double)> eval_;
    std::shared_ptr<const CorrelationTrace> trace_;
};

// Model parameters for a single HOM configuration.
struct HomParams {
    double m = 0.94;             // indistinguishability
    double p0 = 0.920;           // coherent fraction
    double delta = 0.0;          // mutual detuning, GHz (cyclic)
    double t_laser_coh = 200.0;  // ns
    double x = 0.0;              // empirical HBT admixture
    double detector_fwhm = 59.0; // ps
    double t_amzi = 595.0;       // ns

    void validate() const;
};

// Single-photon limit: (1 - m cos 2 pi Delta tau) / 2.
double g2_hom_single_photon(double m, double delta_ghz, double tau_ns);

// Steady-state limit: 1 - (1/2) m p0^2 cos 2 pi Delta tau.
double g2_hom_steady(double m, double p0, double delta_ghz, double tau_ns);

// Bridged model across both limits, with the laser-coherence envelope
// exp(-|tau|/t_laser_coh) on every interference term.
double g2_hom_full(const AutoCorrelation& auto_corr, double m, double p0,
                   double delta_ghz, double tau_ns, double t_laser_coh_ns);

// TPI visibility (g2_perp - g2_par) / g2_perp; throws DivisionDomain for
// g2_perp <= 0.
double visibility(double g2_perp, double g2_par);

// Measured-data model: [x g2 + (1-x) g2_hom_full] convolved with a unit-area
// Gaussian detector response, sampled on tau_grid_ps.
CorrelationTrace g2_hom_measured_model(const AutoCorrelation& auto_corr,
                                       const HomParams& hp,
                                       const std::vector<double>& tau_grid_ps);

// Pointwise geometric mean of the two detuning-signed HBT measurements.
AutoCorrelation combine_hbt_geometric(const AutoCorrelation& g2_plus,
                                      const AutoCorrelation& g2_minus);

// Coincidence level near the +-t_amzi side feature: the average of the four
// uncorrelated source-time combinations.
double g2_hom_side_feature(const AutoCorrelation& auto_corr, double tau_local_ns,
                           double t_amzi_ns);

// Convolve an arbitrary model curve with a unit-area Gaussian of the given
// FWHM, sampled on tau_grid_ps; direct oversampled quadrature.
std::vector<double> convolve_gaussian(const std::function<double(double)>& model_ns,
                                      const std::vector<double>& tau_grid_ps,
                                      double fwhm_ps, double oversample_step_ps);

}  // namespace rftpi
