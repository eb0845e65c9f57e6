#ifndef LATDEV_RATE_HPP
#define LATDEV_RATE_HPP

#include <functional>
#include <vector>

#include "latdev/grid.hpp"
#include "latdev/lbfgs.hpp"
#include "latdev/model.hpp"

namespace latdev {

struct RateOptions {
    std::vector<double> penalties = {1e2, 1e3, 1e4};  // quadratic-penalty continuation
    double grad_tol = 1e-8;
    int max_iterations = 5000;  // per penalty stage
    double residual_tol = 1e-6;
    int lbfgs_memory = 16;
};

struct RateEstimate {
    double cost = 0.0;      // 1/2 sum_m dt |v_m|^2 of the returned control
    double residual = 0.0;  // sup-norm path mismatch (or terminal gap)
    Control control;
    bool converged = false;
    long iterations = 0;
    double grad_norm = 0.0;
    bool feasible = true;  // oracle only: false means cost is +infinity
};

struct IterationRecord {
    int stage = 0;
    double penalty = 0.0;
    int iterations = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double cost = 0.0;
    double residual = 0.0;
};

// Exact gradient of the penalized objective
//   J(v) = 1/2 sum_m dt |v_m|^2 + penalty sum_{m>=1} dt ||u_m - phi_m||^2
// under the explicit-Euler discretization of the controlled equation,
// computed by one backward adjoint sweep. Returns J; fills grad (same shape
// as v.values) and optionally the forward path.
double adjoint_gradient(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                        const Control& v, double penalty, Eigen::MatrixXd& grad,
                        Trajectory* path_out = nullptr);

// Rate-function estimate I(phi) by penalty continuation over RateOptions::
// penalties, warm-starting each stage. phi must start at u0.
RateEstimate rate_estimate(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                           const RateOptions& options = {},
                           std::vector<IterationRecord>* trace = nullptr);

// Closed-form minimal-norm control for purely additive noise (all sigma0
// zero): per node solve H(t_m) v_m = r_m in the least-squares minimal-norm
// sense, where r_m is the explicit-Euler defect of phi and H's columns are
// the h_k(t_m). Defect outside the column span flags the path infeasible
// (cost +infinity).
RateEstimate additive_oracle(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                             double infeasibility_tol = 1e-6);

// Generic terminal-cost control problem: minimize terminal(u_M) + control
// cost under explicit Euler. Stages multiply the terminal weight by
// RateOptions::penalties when `continuation` is true.
struct TerminalObjective {
    std::function<double(const State&)> value;
    std::function<Vector(const State&)> gradient;
};

RateEstimate minimize_terminal(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                               const TerminalObjective& objective, bool continuation,
                               const RateOptions& options = {},
                               std::vector<IterationRecord>* trace = nullptr);

// inf of I over the half-space event {x : <c, x(T)> >= level}, by squared
// hinge penalty with continuation. residual reports the remaining constraint
// gap max(0, level - <c, u(T)>).
RateEstimate endpoint_rate(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                           const State& c, double level, const RateOptions& options = {},
                           std::vector<IterationRecord>* trace = nullptr);

}  // namespace latdev

#endif
