#include "rftpi/levmar.hpp"

#include <cmath>

namespace rftpi {

LevMarOutcome levmar_fit(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& residual_fn,
    Eigen::VectorXd initial, int n_residuals, const LevMarOptions& opts) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const int n_par = static_cast<int>(initial.size());
    VectorXd p = std::move(initial);
    VectorXd r(n_residuals), r_trial(n_residuals);
    residual_fn(p, r);
    double rss = r.squaredNorm();

    MatrixXd jac(n_residuals, n_par);
    double lambda = 1e-3;

    LevMarOutcome out;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        // forward-difference Jacobian
        for (int j = 0; j < n_par; ++j) {
            const double h = opts.jacobian_eps * std::max(std::abs(p[j]), 1.0);
            VectorXd pj = p;
            pj[j] += h;
            residual_fn(pj, r_trial);
            jac.col(j) = (r_trial - r) / h;
        }
        const MatrixXd jtj = jac.transpose() * jac;
        const VectorXd jtr = jac.transpose() * r;

        bool stepped = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            MatrixXd a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            const VectorXd step = a.ldlt().solve(-jtr);
            const VectorXd p_new = p + step;
            residual_fn(p_new, r_trial);
            const double rss_new = r_trial.squaredNorm();
            if (rss_new <= rss) {
                const double rel_step =
                    step.norm() / std::max(p.norm(), 1e-30);
                const double rel_decrease = (rss - rss_new) / std::max(rss, 1e-300);
                p = p_new;
                r = r_trial;
                const bool done = rel_step < opts.step_tol || rel_decrease < opts.residual_tol;
                rss = rss_new;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (done) out.converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (out.converged || !stepped) {
            if (!stepped) out.converged = true;  // no downhill direction left
            ++iter;
            break;
        }
    }

    out.iterations = iter;
    out.params = p;
    out.rss = rss;

    // covariance at the optimum
    for (int j = 0; j < n_par; ++j) {
        const double h = opts.jacobian_eps * std::max(std::abs(p[j]), 1.0);
        VectorXd pj = p;
        pj[j] += h;
        residual_fn(pj, r_trial);
        jac.col(j) = (r_trial - r) / h;
    }
    const int dof = std::max(n_residuals - n_par, 1);
    const double s2 = rss / dof;
    const MatrixXd cov = (jac.transpose() * jac)
                             .ldlt()
                             .solve(MatrixXd::Identity(n_par, n_par)) * s2;
    out.sigma = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return out;
}

}  // namespace rftpi
