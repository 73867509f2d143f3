#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace effham {

struct OptimizerOptions {
    int max_iterations = 500;
    double grad_inf_tol = 1e-8;
    int history = 10; // L-BFGS memory
};

struct OptimizerResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double grad_inf_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool line_search_failed = false;
};

/// Objective callback: returns f(x) and fills grad.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// L-BFGS with backtracking Armijo line search. Monotone: every accepted
/// step decreases the objective, so warm-started energies never increase.
OptimizerResult minimize_lbfgs(const Objective& f, const Eigen::VectorXd& x0,
                               const OptimizerOptions& opts = {});

} // namespace effham
