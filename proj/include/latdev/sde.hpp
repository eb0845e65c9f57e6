#ifndef LATDEV_SDE_HPP
#define LATDEV_SDE_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "latdev/grid.hpp"
#include "latdev/model.hpp"
#include "latdev/rng.hpp"
#include "latdev/stats.hpp"

namespace latdev {

struct SdeConfig {
    double eps = 1.0;  // noise intensity, 0 allowed as the deterministic limit
    TimeGrid grid;
    uint64_t seed = 0;
    long ensemble_size = 1;
    uint64_t sample_offset = 0;  // disjoint seed ranges for estimator checks
    int threads = 1;
    double stability_radius = 8.0;  // ball for the explicit-scheme dt guard

    void check() const;
};

// Largest dt the explicit scheme accepts on the ball ||u|| <= R:
// dt (4 N nu + |gamma| + L_R) <= 1.
double stability_dt_bound(const ModelSpec& spec, double radius);
void check_grid_stability(const ModelSpec& spec, const TimeGrid& grid, double radius);

// One Euler-Maruyama step: u + dt drift(t,u) + sqrt(eps) sigma(t,u) dW.
// dW carries K independent increments of variance dt.
State em_step(const ModelSpec& spec, double t, const State& u, double dt, double eps,
              const Vector& dW, long step_index = -1);

// Euler-Maruyama path for one sample. With a control v the drift gains
// sigma(t,u) v(t) dt, i.e. the Girsanov-shifted system is simulated directly.
Trajectory simulate(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                    const std::optional<Control>& control = std::nullopt,
                    uint64_t sample_index = 0);

// Per-sample functional over the ensemble, parallel over samples, output in
// sample order regardless of thread count.
std::vector<double> ensemble_map(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                                 const std::optional<Control>& control,
                                 const std::function<double(const Trajectory&)>& functional);

// Monte-Carlo estimate of E sup_{t <= T} ||u(t)||^2 with a 95% CI.
MeanCI moment_sup_sq(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                     const std::optional<Control>& control = std::nullopt);
MeanCI moment_sup_sq(const std::vector<double>& per_sample_sup_sq);

// Evaluated Gronwall constant c1 exp(c2 T) dominating E sup ||u_v||^2
// uniformly in eps, for controls with int ||v||^2 <= level.
double gronwall_moment_bound(const ModelSpec& spec, double u0_norm_sq, double control_level);

}  // namespace latdev

#endif
