#include "rftpi/trace_lab.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rftpi/errors.hpp"
#include "rftpi/levmar.hpp"

namespace rftpi {

namespace {

std::vector<double> bin_centers(double tau_min, double tau_max, double bin_width) {
    std::vector<double> taus;
    const auto n = static_cast<std::size_t>(std::floor((tau_max - tau_min) / bin_width + 0.5));
    taus.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        taus.push_back(tau_min + (static_cast<double>(i) + 0.5) * bin_width);
    return taus;
}

bool in_window(double tau, std::pair<double, double> w) {
    return tau >= w.first && tau <= w.second;
}

FitResult from_outcome(const LevMarOutcome& o, const std::vector<std::string>& names) {
    FitResult r;
    for (std::size_t i = 0; i < names.size(); ++i) {
        r.estimates[names[i]] = o.params[static_cast<Eigen::Index>(i)];
        r.sigmas[names[i]] = o.sigma[static_cast<Eigen::Index>(i)];
    }
    r.rss = o.rss;
    r.converged = o.converged;
    r.iterations = o.iterations;
    return r;
}

// unit-sum discrete Gaussian kernel offsets/weights at the trace bin width
std::pair<long, std::vector<double>> discrete_kernel(double fwhm_ps, double bin_ps) {
    const double sigma = fwhm_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const long nk = std::max<long>(1, static_cast<long>(std::ceil(4.0 * sigma / bin_ps)));
    std::vector<double> w(static_cast<std::size_t>(2 * nk + 1));
    double s = 0.0;
    for (long k = -nk; k <= nk; ++k) {
        const double u = static_cast<double>(k) * bin_ps / sigma;
        w[static_cast<std::size_t>(k + nk)] = std::exp(-0.5 * u * u);
        s += w[static_cast<std::size_t>(k + nk)];
    }
    for (double& v : w) v /= s;
    return {nk, std::move(w)};
}

}  // namespace

void SynthConfig::validate() const {
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
    if (!(total_coincidences > 0.0))
        throw std::invalid_argument("total_coincidences must be > 0");
    if (!(tau_max > tau_min)) throw std::invalid_argument("empty tau range");
    if (!seed_set) throw std::invalid_argument("rng seed is mandatory");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

HistogramRecord synthesize_histogram(const SynthConfig& cfg,
                                     const std::function<double(double)>& model_ns) {
    cfg.validate();
    const std::vector<double> taus = bin_centers(cfg.tau_min, cfg.tau_max, cfg.bin_width);

    std::vector<double> expected(taus.size());
    double window_sum = 0.0;
    std::size_t window_bins = 0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        expected[i] = model_ns(ns_from_ps(taus[i]));
        if (expected[i] < 0.0) expected[i] = 0.0;
        if (in_window(taus[i], cfg.window)) {
            window_sum += expected[i];
            ++window_bins;
        }
    }
    if (window_bins == 0 || !(window_sum > 0.0))
        throw EmptyWindow("normalization window holds no model weight");
    const double scale = cfg.total_coincidences / window_sum;

    std::mt19937_64 rng(cfg.seed);
    HistogramRecord rec;
    rec.raw.resize(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::poisson_distribution<std::int64_t> pois(expected[i] * scale);
        rec.raw[i] = pois(rng);
    }
    rec.label = cfg.label;
    rec.detuning = cfg.detuning;
    rec.flux = cfg.flux;
    rec.trace.bin_width = cfg.bin_width;
    rec.trace.taus = taus;
    rec.trace.normalization_window = cfg.window;
    rec.trace.values.assign(taus.size(), 0.0);
    rec.trace = normalize_histogram(rec, cfg.window);
    return rec;
}

CorrelationTrace normalize_histogram(const HistogramRecord& rec,
                                     std::pair<double, double> window_ps) {
    const auto& taus = rec.trace.taus;
    if (taus.size() != rec.raw.size())
        throw std::invalid_argument("trace/raw length mismatch");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (in_window(taus[i], window_ps)) {
            sum += static_cast<double>(rec.raw[i]);
            ++n;
        }
    }
    if (n < 50 || !(sum > 0.0))
        throw EmptyWindow("window needs >= 50 bins with nonzero mean");
    const double mean = sum / static_cast<double>(n);

    CorrelationTrace out;
    out.bin_width = rec.trace.bin_width;
    out.taus = taus;
    out.normalization_window = window_ps;
    out.values.resize(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i)
        out.values[i] = static_cast<double>(rec.raw[i]) / mean;
    return out;
}

FitResult fit_oscillation(const CorrelationTrace& trace, const OscillationInit& init) {
    trace.validate();
    std::vector<double> taus_ns, vals;
    for (std::size_t i = 0; i < trace.taus.size(); ++i) {
        const double t = ns_from_ps(trace.taus[i]);
        if (std::abs(t) < init.exclusion) continue;
        taus_ns.push_back(t);
        vals.push_back(trace.values[i]);
    }
    if (taus_ns.size() < 8) throw std::invalid_argument("too few bins outside exclusion");
    const double span_ns = taus_ns.back() - taus_ns.front();
    if (init.delta > 0.0 && span_ns * init.delta < 3.0)
        throw std::invalid_argument("trace must span >= 3 oscillation periods");

    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double offset0 = std::accumulate(vals.begin(), vals.end(), 0.0) /
                           static_cast<double>(vals.size());

    Eigen::VectorXd p(4);
    p << 0.5 * (*mx - *mn), init.delta, 0.0, offset0;
    auto resid = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < taus_ns.size(); ++i)
            r[static_cast<Eigen::Index>(i)] =
                q[0] * std::cos(two_pi * q[1] * taus_ns[i] + q[2]) + q[3] - vals[i];
    };
    LevMarOptions opts;
    opts.max_iterations = init.max_iterations;
    const LevMarOutcome o = levmar_fit(resid, p, static_cast<int>(taus_ns.size()), opts);
    FitResult r = from_outcome(o, {"amplitude", "delta", "phase", "offset"});
    // sign/phase gauge: report a positive amplitude
    if (r.estimates["amplitude"] < 0.0) {
        r.estimates["amplitude"] = -r.estimates["amplitude"];
        r.estimates["phase"] += std::numbers::pi;
    }
    r.estimates["delta"] = std::abs(r.estimates["delta"]);
    return r;
}

FitResult fit_x(const CorrelationTrace& trace, const AutoCorrelation& auto_corr,
                const HomParams& fixed) {
    trace.validate();
    // The measured model is linear in x, so the bounded least squares has a
    // closed form between the x=0 and x=1 convolved curves.
    HomParams h0 = fixed;
    h0.x = 0.0;
    HomParams h1 = fixed;
    h1.x = 1.0;
    const CorrelationTrace b = g2_hom_measured_model(auto_corr, h0, trace.taus);
    const CorrelationTrace a = g2_hom_measured_model(auto_corr, h1, trace.taus);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        num += d * (trace.values[i] - b.values[i]);
        den += d * d;
    }
    if (!(den > 0.0)) throw std::invalid_argument("x has no leverage on this trace");
    const double x_free = num / den;
    const double x = std::clamp(x_free, 0.0, 1.0);

    FitResult r;
    r.converged = true;
    r.iterations = 1;
    r.boundary_hit = x <= 1e-12 || x >= 1.0 - 1e-12;
    double rss = 0.0;
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        const double model = b.values[i] + x * (a.values[i] - b.values[i]);
        rss += (trace.values[i] - model) * (trace.values[i] - model);
    }
    const double dof = std::max<double>(static_cast<double>(trace.values.size()) - 1.0, 1.0);
    r.rss = rss;
    r.estimates["x"] = x;
    r.sigmas["x"] = std::sqrt(rss / dof / den);
    return r;
}

FitResult fit_lifetime(const CorrelationTrace& decay, double start_delay_ps) {
    decay.validate();
    std::vector<double> ts, vals;
    for (std::size_t i = 0; i < decay.taus.size(); ++i) {
        if (decay.taus[i] < start_delay_ps) continue;
        ts.push_back(decay.taus[i]);
        vals.push_back(decay.values[i]);
    }
    if (ts.size() < 5) throw std::invalid_argument("too few bins after start delay");

    // Poisson weighting: variance scales with the observed level, so weight
    // residuals by 1/sqrt(value) to keep the covariance calibrated.
    double wfloor = 0.0;
    for (double v : vals) wfloor = std::max(wfloor, v);
    wfloor = wfloor > 0.0 ? wfloor * 1e-6 : 1.0;
    std::vector<double> wts(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        wts[i] = 1.0 / std::sqrt(std::max(vals[i], wfloor));

    const double bg0 = vals.back();
    const double a0 = std::max(vals.front() - bg0, 1e-12);
    // crude decay-scale guess from the 1/e crossing
    double t1_0 = (ts.back() - ts.front()) / 4.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (vals[i] - bg0 < a0 / std::numbers::e) {
            t1_0 = std::max(ts[i] - ts.front(), decay.bin_width);
            break;
        }
    }

    Eigen::VectorXd p(3);
    p << t1_0, bg0, a0 * std::exp(ts.front() / t1_0);
    auto resid = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
        const double t1 = std::abs(q[0]);
        for (std::size_t i = 0; i < ts.size(); ++i)
            r[static_cast<Eigen::Index>(i)] =
                wts[i] *
                (q[1] + q[2] * std::exp(-ts[i] / std::max(t1, 1e-9)) - vals[i]);
    };
    const LevMarOutcome o = levmar_fit(resid, p, static_cast<int>(ts.size()));
    FitResult r = from_outcome(o, {"t1", "background", "amplitude"});
    r.estimates["t1"] = std::abs(r.estimates["t1"]);
    return r;
}

FitResult fit_fss_period(const CorrelationTrace& trace) {
    trace.validate();
    const auto& taus = trace.taus;
    const auto& vals = trace.values;

    // period seed from the autocorrelation-free periodogram peak
    const double span = taus.back() - taus.front();
    double best_period = span / 4.0, best_power = -1.0;
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                        static_cast<double>(vals.size());
    for (double period = 4.0 * trace.bin_width; period <= span / 2.0;
         period *= 1.02) {
        double cs = 0.0, sn = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double ph = two_pi * taus[i] / period;
            cs += (vals[i] - mean) * std::cos(ph);
            sn += (vals[i] - mean) * std::sin(ph);
        }
        const double pw = cs * cs + sn * sn;
        if (pw > best_power) {
            best_power = pw;
            best_period = period;
        }
    }
    if (span < 2.0 * best_period)
        throw std::invalid_argument("trace must cover >= 2 oscillation periods");

    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    Eigen::VectorXd p(5);
    p << best_period, 0.5 * (*mx - *mn), span, 0.0, mean;
    auto resid = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double damp = std::exp(-std::abs(taus[i] - taus.front()) /
                                         std::max(std::abs(q[2]), 1.0));
            r[static_cast<Eigen::Index>(i)] =
                q[4] + q[1] * damp * std::cos(two_pi * taus[i] / q[0] + q[3]) - vals[i];
        }
    };
    const LevMarOutcome o = levmar_fit(resid, p, static_cast<int>(taus.size()));
    FitResult r = from_outcome(o, {"period", "amplitude", "tau_damp", "phase", "offset"});
    const double period = std::abs(r.estimates["period"]);
    r.estimates["period"] = period;
    r.estimates["fss"] = 1e3 / period;  // ps -> GHz
    r.sigmas["fss"] = r.sigmas["period"] * 1e3 / (period * period);
    return r;
}

FitResult fringe_g1(const std::vector<double>& counts_c,
                    const std::vector<double>& counts_d) {
    if (counts_c.size() != counts_d.size() || counts_c.size() < 8)
        throw std::invalid_argument("need two equal-length fringe records");
    const auto n = counts_c.size();

    // common fringe frequency from the periodogram of port c
    auto mean_of = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double mc = mean_of(counts_c);
    double best_w = two_pi / static_cast<double>(n), best_power = -1.0;
    for (double w = two_pi / static_cast<double>(n); w <= std::numbers::pi; w *= 1.01) {
        double cs = 0.0, sn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs += (counts_c[i] - mc) * std::cos(w * static_cast<double>(i));
            sn += (counts_c[i] - mc) * std::sin(w * static_cast<double>(i));
        }
        if (cs * cs + sn * sn > best_power) {
            best_power = cs * cs + sn * sn;
            best_w = w;
        }
    }

    auto fit_port = [&](const std::vector<double>& v) {
        Eigen::VectorXd p(4);
        p << 0.5 * (*std::max_element(v.begin(), v.end()) -
                    *std::min_element(v.begin(), v.end())),
            best_w, 0.0, mean_of(v);
        auto resid = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
            for (std::size_t i = 0; i < n; ++i)
                r[static_cast<Eigen::Index>(i)] =
                    q[3] + q[0] * std::cos(q[1] * static_cast<double>(i) + q[2]) - v[i];
        };
        return levmar_fit(resid, p, static_cast<int>(n));
    };
    const LevMarOutcome oc = fit_port(counts_c);
    const LevMarOutcome od = fit_port(counts_d);

    auto vis = [](const LevMarOutcome& o) {
        const double a = std::abs(o.params[0]);
        const double off = o.params[3];
        return off > 0.0 ? std::min(a / off, 1.0) : 0.0;
    };
    const double vc = vis(oc), vd = vis(od);

    // anti-correlation consistency between the two ports
    const double md = mean_of(counts_d);
    double cov = 0.0, sc = 0.0, sd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (counts_c[i] - mc) * (counts_d[i] - md);
        sc += (counts_c[i] - mc) * (counts_c[i] - mc);
        sd += (counts_d[i] - md) * (counts_d[i] - md);
    }
    const double corr = (sc > 0.0 && sd > 0.0) ? cov / std::sqrt(sc * sd) : 0.0;

    FitResult r;
    r.converged = oc.converged && od.converged;
    r.iterations = oc.iterations + od.iterations;
    r.rss = oc.rss + od.rss;
    const double dof = std::max<double>(static_cast<double>(n) - 4.0, 1.0);
    const double noise_c = std::sqrt(oc.rss / dof);
    const double noise_d = std::sqrt(od.rss / dof);
    if (std::abs(oc.params[0]) <= 3.0 * noise_c / std::sqrt(static_cast<double>(n) / 2.0) ||
        std::abs(od.params[0]) <= 3.0 * noise_d / std::sqrt(static_cast<double>(n) / 2.0)) {
        r.phase_unresolved = true;
        r.estimates["g1_magnitude"] = 0.0;
        r.sigmas["g1_magnitude"] = 0.0;
        return r;
    }
    if (corr > 0.0) r.phase_unresolved = true;  // ports should anti-correlate

    r.estimates["g1_magnitude"] = 0.5 * (vc + vd);
    const double s_c = vc * std::sqrt(std::pow(oc.sigma[0] / std::max(std::abs(oc.params[0]), 1e-12), 2) +
                                      std::pow(oc.sigma[3] / std::max(oc.params[3], 1e-12), 2));
    const double s_d = vd * std::sqrt(std::pow(od.sigma[0] / std::max(std::abs(od.params[0]), 1e-12), 2) +
                                      std::pow(od.sigma[3] / std::max(od.params[3], 1e-12), 2));
    r.sigmas["g1_magnitude"] = 0.5 * std::sqrt(s_c * s_c + s_d * s_d);
    return r;
}

AutoCorrelation deconvolve_response(const CorrelationTrace& trace, double fwhm_ps) {
    trace.validate();
    if (!(fwhm_ps >= 0.0)) throw std::invalid_argument("fwhm must be >= 0");
    if (fwhm_ps < 0.5 * trace.bin_width) {
        return AutoCorrelation::tabulated(trace);  // response below grid scale: identity
    }

    const auto n = static_cast<long>(trace.values.size());
    auto [nk, w] = discrete_kernel(fwhm_ps, trace.bin_width);

    // banded convolution matrix; out-of-range taps replicate the edge bin so
    // rows stay unit-sum and a flat signal is a fixed point
    Eigen::SparseMatrix<double> K(n, n);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * w.size());
    for (long i = 0; i < n; ++i)
        for (long k = -nk; k <= nk; ++k) {
            const long j = std::clamp(i + k, 0L, n - 1);
            trip.emplace_back(i, j, w[static_cast<std::size_t>(k + nk)]);
        }
    K.setFromTriplets(trip.begin(), trip.end());
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(trace.values.data(), n);

    const Eigen::SparseMatrix<double> ktk = Eigen::SparseMatrix<double>(K.transpose()) * K;
    const Eigen::VectorXd kty = K.transpose() * y;
    // smoothness seminorm: penalize first differences so a flat trace is an
    // exact fixed point at any regularization strength
    Eigen::SparseMatrix<double> D(n - 1, n);
    std::vector<Eigen::Triplet<double>> dtrip;
    for (long i = 0; i + 1 < n; ++i) {
        dtrip.emplace_back(i, i, -1.0);
        dtrip.emplace_back(i, i + 1, 1.0);
    }
    D.setFromTriplets(dtrip.begin(), dtrip.end());
    const Eigen::SparseMatrix<double> dtd = Eigen::SparseMatrix<double>(D.transpose()) * D;

    auto residual_sup = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd back = K * u;
        double sup = 0.0;
        for (long i = 0; i < n; ++i) {
            if (std::abs(trace.taus[static_cast<std::size_t>(i)]) < fwhm_ps) continue;
            sup = std::max(sup, std::abs(back[i] - y[i]));
        }
        return sup;
    };

    Eigen::VectorXd best_u;
    double best_res = std::numeric_limits<double>::infinity();
    for (double lambda = 1e-2; lambda >= 1e-10; lambda *= 1e-2) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
        solver.compute(ktk + lambda * dtd);
        if (solver.info() != Eigen::Success) continue;
        const Eigen::VectorXd u = solver.solve(kty);
        const double res = residual_sup(u);
        if (res < best_res) {
            best_res = res;
            best_u = u;
        }
    }
    if (!(best_res <= 0.05))
        throw IllConditioned("re-convolution residual exceeds 5%");

    CorrelationTrace out = trace;
    for (long i = 0; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] = std::max(best_u[i], 0.0);
    return AutoCorrelation::tabulated(std::move(out));
}

std::function<double(double)> interpolate_g2_zero(
    std::vector<std::pair<double, double>> measurements) {
    if (measurements.size() < 2)
        throw std::invalid_argument("need at least two (detuning, g2_zero) points");
    std::sort(measurements.begin(), measurements.end());
    for (std::size_t i = 1; i < measurements.size(); ++i)
        if (measurements[i].first == measurements[i - 1].first)
            throw DuplicateAbscissa("duplicate detuning abscissa");

    const std::size_t n = measurements.size();
    std::vector<double> xs(n), ys(n), d(n - 1), h(n - 1), m(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = measurements[i].first;
        ys[i] = measurements[i].second;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs[i + 1] - xs[i];
        d[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    // Fritsch-Carlson monotone slopes
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m[i] = m[i + 1] = 0.0;
            continue;
        }
        const double a = m[i] / d[i], b = m[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double t = 3.0 / std::sqrt(s);
            m[i] = t * a * d[i];
            m[i + 1] = t * b * d[i];
        }
    }

    return [xs, ys, m, h](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), x) - xs.begin() - 1);
        const double t = (x - xs[i]) / h[i];
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * ys[i] + h10 * h[i] * m[i] + h01 * ys[i + 1] + h11 * h[i] * m[i + 1];
    };
}

}  // namespace rftpi
