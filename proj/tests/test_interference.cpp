#include <doctest.h>

#include <cmath>
#include <random>

#include "rftpi/errors.hpp"
#include "rftpi/interference.hpp"

using namespace rftpi;

namespace {

std::vector<double> grid_ps(double lo, double hi, double step) {
    std::vector<double> g;
    for (double t = lo; t <= hi + 1e-9; t += step) g.push_back(t);
    return g;
}

}  // namespace

TEST_CASE("single-photon limit values") {
    CHECK(g2_hom_single_photon(0.0, 1.0, 0.37) == doctest::Approx(0.5));
    CHECK(g2_hom_single_photon(1.0, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(g2_hom_single_photon(1.0, 1.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("steady-state limit values") {
    CHECK(g2_hom_steady(0.94, 0.920, 1.0, 0.0) == doctest::Approx(0.6022).epsilon(2e-4));
    CHECK(g2_hom_steady(0.0, 0.9, 1.0, 0.7) == doctest::Approx(1.0));
    CHECK(g2_hom_steady(0.94, 0.92, 1.0, 0.25) == doctest::Approx(1.0));
}

TEST_CASE("steady-state trace oscillates with period 1/delta and bounded range") {
    const double delta = 0.5;  // GHz -> 2 ns period
    const double m = 0.94, p0 = 0.92;
    // locate minima spacing on a fine sampled trace
    double prev_min = -1.0;
    std::vector<double> minima;
    const double step = 0.001;
    std::vector<double> vals;
    std::vector<double> taus;
    for (double tau = 0.0; tau <= 6.0; tau += step) {
        taus.push_back(tau);
        vals.push_back(g2_hom_steady(m, p0, delta, tau));
    }
    for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
        if (vals[i] < vals[i - 1] && vals[i] <= vals[i + 1]) minima.push_back(taus[i]);
    }
    REQUIRE(minima.size() >= 2);
    for (std::size_t i = 1; i < minima.size(); ++i)
        CHECK(minima[i] - minima[i - 1] == doctest::Approx(2.0).epsilon(1e-3));
    (void)prev_min;

    const double amp = 0.5 * m * p0 * p0;
    for (double v : vals) {
        CHECK(v >= 1.0 - amp - 1e-12);
        CHECK(v <= 1.0 + amp + 1e-12);
    }
}

TEST_CASE("bridged model limit reductions") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const AutoCorrelation unity = AutoCorrelation::constant(1.0);
    const AutoCorrelation zero = AutoCorrelation::constant(0.0);
    for (int i = 0; i < 1000; ++i) {
        const double m = u(rng), p0 = u(rng), tau = 2.0 * u(rng);
        CHECK(std::abs(g2_hom_full(unity, m, p0, 1.0, tau, 1e18) -
                       g2_hom_steady(m, p0, 1.0, tau)) <= 1e-12);
        CHECK(std::abs(g2_hom_full(zero, m, p0, 1.0, tau, 1e18) -
                       g2_hom_single_photon(m, 1.0, tau)) <= 1e-12);
    }
}

TEST_CASE("bridged model endpoints") {
    const AutoCorrelation hbt = AutoCorrelation::parametric(0.0, 0.074);
    CHECK(g2_hom_full(hbt, 1.0, 0.9, 0.0, 0.0, 200.0) == doctest::Approx(0.0));
    // far delay with a finite laser coherence recovers unity
    CHECK(g2_hom_full(hbt, 0.94, 0.92, 0.0, 5000.0, 200.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("visibility") {
    CHECK(visibility(0.5, 0.03) == doctest::Approx(0.94));
    CHECK(visibility(0.42, 0.42) == doctest::Approx(0.0));
    const double m = 0.83;
    CHECK(visibility(0.5, 0.5 * (1.0 - m)) == doctest::Approx(m));
    CHECK_THROWS_AS(visibility(0.0, 0.1), DivisionDomain);
}

TEST_CASE("visibility equals m in the ideal zero-delay limit") {
    const AutoCorrelation zero = AutoCorrelation::constant(0.0);
    const double m = 0.7342;
    const double par = g2_hom_full(zero, m, 0.92, 2.0, 0.0, 1e18);
    const double perp = g2_hom_full(zero, 0.0, 0.92, 2.0, 0.0, 1e18);
    CHECK(std::abs(visibility(perp, par) - m) <= 1e-12);
}

TEST_CASE("measured model limits") {
    const AutoCorrelation hbt = AutoCorrelation::parametric(0.026, 0.074);
    HomParams hp;
    hp.m = 0.94;
    hp.p0 = 0.92;
    hp.delta = 0.5;

    SUBCASE("x = 1 reduces to the convolved HBT trace") {
        hp.x = 1.0;
        const auto grid = grid_ps(-2000.0, 2000.0, 20.0);
        const CorrelationTrace t = g2_hom_measured_model(hbt, hp, grid);
        const double step = std::min(20.0, hp.detector_fwhm / 4.0) / 4.0;
        const auto direct = convolve_gaussian([&](double tau) { return hbt(tau); }, grid,
                                              hp.detector_fwhm, step);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(t.values[i] == doctest::Approx(direct[i]).epsilon(1e-9));
    }
    SUBCASE("x = 0 with a delta response is the bare bridged model") {
        hp.x = 0.0;
        hp.detector_fwhm = 0.0;
        const auto grid = grid_ps(-1000.0, 1000.0, 10.0);
        const CorrelationTrace t = g2_hom_measured_model(hbt, hp, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double tau_ns = ns_from_ps(grid[i]);
            CHECK(t.values[i] ==
                  doctest::Approx(g2_hom_full(hbt, hp.m, hp.p0, hp.delta, tau_ns,
                                              hp.t_laser_coh)).epsilon(1e-12));
        }
    }
    SUBCASE("finite response cannot resolve a fast-detuning dip") {
        // 4 GHz oscillation under a 59 ps response: dip fills in markedly
        const AutoCorrelation pure = AutoCorrelation::parametric(0.0, 0.074);
        HomParams fast;
        fast.m = 1.0;
        fast.p0 = 1.0;
        fast.delta = 4.0;
        fast.x = 0.0;
        fast.t_laser_coh = 1e18;
        const auto grid = grid_ps(-500.0, 500.0, 10.0);
        const CorrelationTrace t = g2_hom_measured_model(pure, fast, grid);
        const double dip = t.values[grid.size() / 2];
        CHECK(dip > 0.15);  // far from the unconvolved 0
        CHECK(dip < 0.85);
    }
    SUBCASE("grid coarser than the response is rejected") {
        const auto grid = grid_ps(-1000.0, 1000.0, 100.0);
        CHECK_THROWS_AS(g2_hom_measured_model(hbt, hp, grid), GridTooCoarse);
    }
    SUBCASE("convolution preserves the long-delay mean") {
        hp.x = 0.0;
        hp.delta = 0.0;  // smooth long-delay tail isolates the kernel-area property
        const auto grid = grid_ps(-20000.0, 20000.0, 50.0);
        const CorrelationTrace t = g2_hom_measured_model(hbt, hp, grid);
        double conv_mean = 0.0, model_mean = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < t.normalization_window.first ||
                grid[i] > t.normalization_window.second)
                continue;
            conv_mean += t.values[i];
            model_mean += g2_hom_full(hbt, hp.m, hp.p0, hp.delta, ns_from_ps(grid[i]),
                                      hp.t_laser_coh);
            ++n;
        }
        REQUIRE(n > 0);
        CHECK(conv_mean / n == doctest::Approx(model_mean / n).epsilon(1e-6));
    }
}

TEST_CASE("geometric HBT combination") {
    SUBCASE("identical parametric inputs") {
        const AutoCorrelation a = AutoCorrelation::parametric(0.026, 0.1);
        const AutoCorrelation c = combine_hbt_geometric(a, a);
        for (double tau : {0.0, 0.05, 0.3, 2.0})
            CHECK(c(tau) == doctest::Approx(a(tau)).epsilon(1e-12));
        CHECK(c.g2_zero() == doctest::Approx(0.026));
    }
    SUBCASE("mixed zero values") {
        const AutoCorrelation a = AutoCorrelation::parametric(0.04, 0.1);
        const AutoCorrelation b = AutoCorrelation::parametric(0.09, 0.1);
        CHECK(combine_hbt_geometric(a, b).g2_zero() == doctest::Approx(0.06));
    }
    SUBCASE("tabulated combination on a common grid") {
        CorrelationTrace t;
        t.bin_width = 10.0;
        for (int i = 0; i < 100; ++i) {
            t.taus.push_back(5.0 + 10.0 * i);
            t.values.push_back(1.0);
        }
        auto t2 = t;
        for (auto& v : t2.values) v = 4.0;
        const AutoCorrelation c = combine_hbt_geometric(AutoCorrelation::tabulated(t),
                                                        AutoCorrelation::tabulated(t2));
        CHECK(c(0.1) == doctest::Approx(2.0));
    }
}

TEST_CASE("side feature at the interferometer delay") {
    SUBCASE("ideal single photons give the 0.75 dip") {
        const AutoCorrelation a = AutoCorrelation::parametric(0.0, 0.074);
        CHECK(g2_hom_side_feature(a, 0.0, 595.0) == doctest::Approx(0.75).epsilon(1e-9));
    }
    SUBCASE("classical stream stays at 1") {
        const AutoCorrelation a = AutoCorrelation::constant(1.0);
        CHECK(g2_hom_side_feature(a, 0.0, 595.0) == doctest::Approx(1.0));
    }
    SUBCASE("finite g2(0)") {
        const AutoCorrelation a = AutoCorrelation::parametric(0.026, 0.074);
        CHECK(g2_hom_side_feature(a, 0.0, 595.0) ==
              doctest::Approx(0.75 + 0.026 / 4.0).epsilon(1e-9));
    }
}

TEST_CASE("trace validation") {
    CorrelationTrace t;
    t.bin_width = 10.0;
    t.taus = {0.0, 10.0, 25.0};
    t.values = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.taus = {0.0, 10.0, 20.0};
    CHECK_NOTHROW(t.validate());
    t.values[1] = -0.1;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
