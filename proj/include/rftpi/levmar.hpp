#pragma once

#include <Eigen/Dense>
#include <functional>

// Small damped least-squares engine used by every fitter in trace_lab.
// Numeric forward-difference Jacobian, multiplicative lambda control,
// covariance from (J^T J)^-1 scaled by reduced chi-square.

namespace rftpi {

struct LevMarOptions {
    int max_iterations = 200;
    double step_tol = 1e-8;      // relative parameter step
    double residual_tol = 1e-12; // relative residual decrease
    double jacobian_eps = 1e-6;
};

struct LevMarOutcome {
    Eigen::VectorXd params;
    Eigen::VectorXd sigma;  // one-sigma uncertainties
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
};

// residual_fn fills r (fixed length) from the current parameter vector.
LevMarOutcome levmar_fit(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& residual_fn,
    Eigen::VectorXd initial, int n_residuals, const LevMarOptions& opts = {});

}  // namespace rftpi
