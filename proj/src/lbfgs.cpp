#include "latdev/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace latdev {

LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    Eigen::VectorXd x0, const LbfgsOptions& options) {
    using Eigen::VectorXd;

    struct Pair {
        VectorXd s, y;
        double rho;
    };
    std::deque<Pair> history;

    LbfgsResult res;
    res.x = std::move(x0);
    VectorXd grad(res.x.size());
    res.f = fg(res.x, grad);
    res.grad_norm = grad.norm();

    double h0_scale = 1.0;
    int stalled = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (res.grad_norm < options.grad_tol) {
            res.converged = true;
            break;
        }

        // Two-loop recursion.
        VectorXd q = grad;
        std::vector<double> alpha(history.size());
        for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
            alpha[i] = history[i].rho * history[i].s.dot(q);
            q -= alpha[i] * history[i].y;
        }
        q *= h0_scale;
        for (size_t i = 0; i < history.size(); ++i) {
            const double beta = history[i].rho * history[i].y.dot(q);
            q += (alpha[i] - beta) * history[i].s;
        }
        VectorXd dir = -q;

        double dg = dir.dot(grad);
        if (dg >= 0.0) {  // model lost descent; restart from steepest descent
            dir = -grad;
            dg = -res.grad_norm * res.grad_norm;
            history.clear();
            h0_scale = 1.0;
        }

        // Weak Wolfe line search by bracketing. The Armijo test carries a
        // floating-point allowance so gradient contraction can continue after
        // objective progress drops below double resolution.
        const double c1 = options.armijo_c, c2 = 0.9;
        const double f_noise = 1e-14 * (1.0 + std::abs(res.f));
        double step = history.empty() ? std::min(1.0, 1.0 / std::max(res.grad_norm, 1e-12)) : 1.0;
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        VectorXd x_new, grad_new(res.x.size());
        double f_new = res.f;
        bool accepted = false;
        for (int ls = 0; ls < options.max_backtracks; ++ls) {
            x_new = res.x + step * dir;
            f_new = fg(x_new, grad_new);
            if (!std::isfinite(f_new) || f_new > res.f + c1 * step * dg + f_noise) {
                hi = step;
                step = 0.5 * (lo + hi);
            } else if (grad_new.dot(dir) < c2 * dg) {
                lo = step;
                step = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * step;
            } else {
                accepted = true;
                break;
            }
        }
        res.iterations = it + 1;
        if (!accepted && !(std::isfinite(f_new) && f_new <= res.f + f_noise)) break;

        const VectorXd s = x_new - res.x;
        const VectorXd y = grad_new - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            history.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(history.size()) > options.memory) history.pop_front();
            h0_scale = sy / y.squaredNorm();
        }

        // Stop once neither the objective nor the gradient makes progress.
        const bool f_progress = res.f - f_new > f_noise;
        const bool g_progress = grad_new.norm() < 0.999 * res.grad_norm;
        if (!f_progress && !g_progress) {
            if (++stalled >= 25) {
                res.x = std::move(x_new);
                res.f = f_new;
                grad = grad_new;
                res.grad_norm = grad.norm();
                break;
            }
        } else {
            stalled = 0;
        }

        res.x = std::move(x_new);
        res.f = f_new;
        grad = grad_new;
        res.grad_norm = grad.norm();
    }
    res.grad_norm = grad.norm();
    if (res.grad_norm < options.grad_tol) res.converged = true;
    return res;
}

}  // namespace latdev
