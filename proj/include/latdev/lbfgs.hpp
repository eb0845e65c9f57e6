#ifndef LATDEV_LBFGS_HPP
#define LATDEV_LBFGS_HPP

#include <Eigen/Dense>
#include <functional>

namespace latdev {

struct LbfgsOptions {
    int memory = 16;
    double grad_tol = 1e-8;  // stop when ||grad||_2 < grad_tol
    int max_iterations = 5000;
    double armijo_c = 1e-4;
    double step_shrink = 0.5;
    int max_backtracks = 60;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Limited-memory BFGS with backtracking Armijo line search. `fg` evaluates
// the objective and writes the gradient. Curvature pairs with s'y <= 0 are
// skipped so the inverse-Hessian model stays positive definite.
LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    Eigen::VectorXd x0, const LbfgsOptions& options = {});

}  // namespace latdev

#endif
