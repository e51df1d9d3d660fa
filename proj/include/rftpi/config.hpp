#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// INI-style run configuration. Sections [emitter], [drive], [hom],
// [synthesis], [fit]; unspecified keys take the documented defaults and
// unknown keys are a hard error.

namespace rftpi {

struct RunConfig {
    // [emitter]
    double t1_ps = 74.0;
    double gamma_star = 0.0;  // rad/ns
    double fss_ghz = 0.91;
    double cavity_g_ghz = 6.2;
    double cavity_kappa_ghz = 35.0;
    double gamma_bulk_ghz = 0.2015;

    // [drive]
    double omega = 0.0;  // rad/ns
    double delta_ghz = 0.5;
    double nbar = 0.05;
    double eta_ab = 0.8696;
    double nu_ghz = 0.0;
    double t_laser_coh_ns = 200.0;

    // [hom]
    double m = 0.94;
    double x = 0.0;
    double detector_fwhm_ps = 59.0;
    double t_amzi_ns = 595.0;
    double g2_zero = 0.026;
    double tau_dip_ns = 0.074;
    // optional per-detuning tables "d1:v1,d2:v2,..." (GHz : value)
    std::vector<std::pair<double, double>> g2_zero_points;
    std::vector<std::pair<double, double>> x_points;

    // [synthesis]
    double tau_min_ns = -400.0;
    double tau_max_ns = 400.0;
    double bin_width_ps = 50.0;
    double total_coincidences = 1.0e6;
    double window_min_ns = 200.0;
    double window_max_ns = 400.0;
    std::optional<std::uint64_t> seed;
    std::string label;

    // [fit]
    std::string fit_kind = "oscillation";
    double exclusion_ns = 0.5;
    double start_delay_ps = 200.0;
    double fit_delta_ghz = 0.5;
    int max_iterations = 200;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    std::string emit() const;
};

}  // namespace rftpi
