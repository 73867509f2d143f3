#include "effham/optimizer.hpp"

#include <cmath>
#include <deque>

namespace effham {

OptimizerResult minimize_lbfgs(const Objective& f, const Eigen::VectorXd& x0,
                               const OptimizerOptions& opts) {
    OptimizerResult res;
    const auto n = x0.size();
    Eigen::VectorXd x = x0, grad(n);
    double fx = f(x, grad);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        res.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
        if (res.grad_inf_norm < opts.grad_inf_tol) {
            res.converged = true;
            break;
        }

        // two-loop recursion
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[static_cast<std::size_t>(i)] =
                rho_hist[static_cast<std::size_t>(i)] * s_hist[static_cast<std::size_t>(i)].dot(q);
            q -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            q *= s.dot(y) / y.dot(y);
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;
        double dg = dir.dot(grad);
        if (dg >= 0.0) { // not a descent direction; reset to steepest descent
            dir = -grad;
            dg = -grad.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // backtracking Armijo
        double step = 1.0;
        const double c1 = 1e-4;
        Eigen::VectorXd x_new(n), grad_new(n);
        double fx_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + step * dir;
            fx_new = f(x_new, grad_new);
            if (std::isfinite(fx_new) && fx_new <= fx + c1 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.line_search_failed = true;
            break;
        }

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = grad_new - grad;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(x_new);
        grad = std::move(grad_new);
        fx = fx_new;
        res.iterations = iter + 1;
    }

    res.x = x;
    res.value = fx;
    res.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
    if (res.grad_inf_norm < opts.grad_inf_tol) res.converged = true;
    return res;
}

} // namespace effham
