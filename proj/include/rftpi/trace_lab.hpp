#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rftpi/interference.hpp"

// Synthetic-experiment and fitting layer: Poisson-noised coincidence
// histograms, the oscillation/x/lifetime/FSS/fringe fitters, histogram
// normalization and detector-response deconvolution.

namespace rftpi {

struct SynthConfig {
    double tau_min = -4.0e5;             // ps
    double tau_max = 4.0e5;              // ps
    double bin_width = 50.0;             // ps
    double total_coincidences = 1.0e6;   // expected count inside the window
    std::pair<double, double> window{2.0e5, 4.0e5};  // ps
    std::uint64_t seed = 0;
    bool seed_set = false;  // seeds are mandatory; no entropy default
    std::string label;
    double detuning = 0.0;  // GHz, metadata
    double flux = 0.0;      // nbar, metadata

    void validate() const;
};

struct FitResult {
    std::map<std::string, double> estimates;
    std::map<std::string, double> sigmas;
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
    bool boundary_hit = false;
    bool phase_unresolved = false;
};

struct HistogramRecord {
    CorrelationTrace trace;            // normalized
    std::vector<std::int64_t> raw;     // pre-normalization counts
    std::string label;
    double detuning = 0.0;  // GHz
    double flux = 0.0;      // nbar
};

// Derive a child seed from a root seed and task index (splitmix64 step);
// deterministic regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Poisson-sample a histogram from a model curve (tau in ns). The expected
// counts are scaled so the normalization window sums to total_coincidences.
HistogramRecord synthesize_histogram(const SynthConfig& cfg,
                                     const std::function<double(double)>& model_ns);

// Scale raw counts so the mean over the window is 1. Window in ps; needs at
// least 50 bins with nonzero mean.
CorrelationTrace normalize_histogram(const HistogramRecord& rec,
                                     std::pair<double, double> window_ps);

struct OscillationInit {
    double delta = 0.5;        // GHz
    double exclusion = 0.5;    // ns half-width around zero delay left out
    int max_iterations = 200;
};

// A cos(2 pi Delta tau + phase) + offset on the |tau| >> T1 region.
// Estimates: amplitude, delta (GHz), phase, offset.
FitResult fit_oscillation(const CorrelationTrace& trace, const OscillationInit& init);

// One-dimensional bounded least squares for the empirical x in [0, 1];
// boundary_hit is set when the optimum pins to an endpoint.
FitResult fit_x(const CorrelationTrace& trace, const AutoCorrelation& auto_corr,
                const HomParams& fixed);

// b + A exp(-t/T1) on the tail after start_delay_ps. Estimates: t1 (ps),
// background, amplitude.
FitResult fit_lifetime(const CorrelationTrace& decay, double start_delay_ps = 200.0);

// Damped cosine modulation; estimates: period (ps), fss (GHz), amplitude,
// tau_damp (ps), phase, offset.
FitResult fit_fss_period(const CorrelationTrace& trace);

// Anti-phase fringe records from the two interferometer ports; estimate
// |g1| = amplitude/offset with a two-port consistency check.
FitResult fringe_g1(const std::vector<double>& counts_c,
                    const std::vector<double>& counts_d);

// Tikhonov-regularized deconvolution of the detector response; the
// regularization strength is chosen so re-convolving reproduces the input
// within 2% sup-norm outside |tau| < fwhm.
AutoCorrelation deconvolve_response(const CorrelationTrace& trace, double fwhm_ps);

// Monotone piecewise-cubic interpolant through (detuning, g2_zero) points;
// extrapolation clamps to the nearest endpoint.
std::function<double(double)> interpolate_g2_zero(
    std::vector<std::pair<double, double>> measurements);

}  // namespace rftpi
