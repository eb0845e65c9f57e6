#ifndef LATDEV_SKELETON_HPP
#define LATDEV_SKELETON_HPP

#include <cstdint>
#include <vector>

#include "latdev/grid.hpp"
#include "latdev/model.hpp"

namespace latdev {

struct SolveOptions {
    double stability_radius = 1e6;  // solve aborts once ||u|| leaves this ball
};

// Classical RK4 integration of the controlled equation
//   du/dt = -nu A u - f(u) - gamma u + g(t) + sigma(t, u) v(t),
// with v piecewise constant per step. This realizes the deterministic
// solution map behind the rate function: zero control gives the unforced flow.
Trajectory solve(const ModelSpec& spec, const TimeGrid& grid, const State& u0, const Control& v,
                 const SolveOptions& options = {});
Trajectory solve_unforced(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                          const SolveOptions& options = {});

// Certified Gronwall upper bound for sup_t ||u_v(t)||^2, evaluated from the
// model constants (alpha, ||delta||^2, gamma, T, int ||g||^2, sum ||h_k||^2,
// int ||v||^2).
double apriori_bound(const ModelSpec& spec, const State& u0, const Control& v);

struct ContinuityReport {
    double distance_sq = 0.0;   // ||u_{v1} - u_{v2}||^2 in the sup metric
    double bound = 0.0;         // evaluated right-hand side of the estimate
    double c1 = 0.0;            // the constant C1(R1, R2, T)
    double input_gap_sq = 0.0;  // ||du0||^2 + ||dv||^2_{L2}
    bool holds = false;
};

// Joint continuity in (u0, v): distance^2 <= C1 (||du0||^2 + ||dv||^2).
ContinuityReport continuity_check(const ModelSpec& spec, const TimeGrid& grid, const State& u01,
                                  const State& u02, const Control& v1, const Control& v2,
                                  const SolveOptions& options = {});

struct WeakProbeRow {
    int n = 0;
    double distance = 0.0;  // ||u_{v_n} - u_v|| in the sup metric
};

// Oscillatory weak-null family v_n(t) = v(t) + sin(2 pi n t) w. The v_n
// converge weakly (not strongly) to v; the solution map sends them strongly
// to u_v, so the distances should decay toward the grid floor.
std::vector<WeakProbeRow> weak_convergence_probe(const ModelSpec& spec, const TimeGrid& grid,
                                                 const State& u0, const Control& v,
                                                 const Vector& w, const std::vector<int>& n_list,
                                                 const SolveOptions& options = {});

struct LevelSetReport {
    double level = 0.0;
    int samples = 0;
    double modulus = 0.0;       // max over samples of max_m ||u(t_{m+1}) - u(t_m)||
    double tail = 0.0;          // max over samples of sup_t tail mass beyond radius/2
    int net_size = 0;           // greedy eps-net size at radius 0.1, sup metric
    double net_radius = 0.1;
    std::vector<int> assignment;  // net center index per sample
    std::vector<double> sample_modulus;
    std::vector<double> sample_tail;
    double max_control_l2_sq = 0.0;
};

// Compactness diagnostics for {u_v : int ||v||^2 <= level}: equicontinuity
// modulus, spatial tail mass, and an eps-net size that should stay bounded as
// the sample count grows.
LevelSetReport level_set_probe(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                               double level, int sample_count, uint64_t seed, int threads = 1,
                               const SolveOptions& options = {});

}  // namespace latdev

#endif
