#include "latdev/sde.hpp"

#include <cmath>

namespace latdev {

void SdeConfig::check() const {
    if (!(eps >= 0.0) || eps > 1.0) throw ConfigError("eps must lie in [0, 1]");
    if (ensemble_size < 1) throw ConfigError("ensemble_size must be >= 1");
}

double stability_dt_bound(const ModelSpec& spec, double radius) {
    const double lr =
        max_abs_on_interval(spec.drift.f().derivative(), -radius, radius);
    return 1.0 / (4.0 * spec.window.dim() * spec.drift.nu + std::abs(spec.drift.gamma) + lr);
}

void check_grid_stability(const ModelSpec& spec, const TimeGrid& grid, double radius) {
    const double bound = stability_dt_bound(spec, radius);
    if (grid.dt() > bound)
        throw ConfigError("dt = " + std::to_string(grid.dt()) +
                          " violates the explicit-scheme guard dt <= " + std::to_string(bound) +
                          " on the ball of radius " + std::to_string(radius));
}

State em_step(const ModelSpec& spec, double t, const State& u, double dt, double eps,
              const Vector& dW, long step_index) {
    State next = drift(spec, t, u);
    next.values = u.values + dt * next.values;
    if (eps > 0.0) sigma_apply_add(spec, t, u, dW, std::sqrt(eps), next);
    if (!next.values.allFinite())
        throw SimulationBlowup(step_index, "state became non-finite (reduce dt or eps)");
    return next;
}

Trajectory simulate(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                    const std::optional<Control>& control, uint64_t sample_index) {
    config.check();
    if (u0.window != spec.window) throw DimensionMismatch("simulate: u0 window mismatch");
    if (control) {
        check_same_grid(control->grid, config.grid, "simulate");
        if (control->modes() != spec.mode_count())
            throw DimensionMismatch("simulate: control mode count mismatch");
    }
    check_grid_stability(spec, config.grid, config.stability_radius);

    const int K = spec.mode_count();
    const double dt = config.grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    const double sqrt_eps = std::sqrt(config.eps);
    const CounterRng rng(config.seed);
    const uint64_t sample = config.sample_offset + sample_index;
    const Polynomial f = spec.drift.f();

    Trajectory path(config.grid, spec.window);
    State u = u0;
    State rhs = State::zero(spec.window);
    path.set(0, u);
    Vector dW = Vector::Zero(K);
    Vector vm = Vector::Zero(K);
    std::vector<double> z(static_cast<size_t>(std::max(K, 1)));
    for (int m = 0; m < config.grid.steps; ++m) {
        const double t = config.grid.node(m);
        drift_into(spec, f, t, u, rhs);
        if (control) {
            vm = control->values.row(m);
            sigma_apply_add(spec, t, u, vm, 1.0, rhs);
        }
        rhs.values = u.values + dt * rhs.values;
        if (config.eps > 0.0 && K > 0) {
            rng.fill_normals(sample, static_cast<uint32_t>(m), RngPurpose::sde_noise, z.data(), K);
            for (int k = 0; k < K; ++k) dW[k] = sqrt_dt * z[static_cast<size_t>(k)];
            sigma_apply_add(spec, t, u, dW, sqrt_eps, rhs);
        }
        if (!rhs.values.allFinite())
            throw SimulationBlowup(m, "state became non-finite (reduce dt or eps)");
        std::swap(u.values, rhs.values);
        path.set(m + 1, u);
    }
    return path;
}

std::vector<double> ensemble_map(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                                 const std::optional<Control>& control,
                                 const std::function<double(const Trajectory&)>& functional) {
    config.check();
    std::vector<double> out(static_cast<size_t>(config.ensemble_size));
    parallel_for(config.ensemble_size, config.threads, [&](long i) {
        out[static_cast<size_t>(i)] =
            functional(simulate(spec, config, u0, control, static_cast<uint64_t>(i)));
    });
    return out;
}

MeanCI moment_sup_sq(const std::vector<double>& per_sample_sup_sq) {
    return mean_ci(per_sample_sup_sq);
}

MeanCI moment_sup_sq(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                     const std::optional<Control>& control) {
    return mean_ci(ensemble_map(spec, config, u0, control,
                                [](const Trajectory& tr) { return tr.sup_norm_sq(); }));
}

double gronwall_moment_bound(const ModelSpec& spec, double u0_norm_sq, double control_level) {
    const double T = spec.horizon;
    const double a2d2 = model_alpha(spec) * model_alpha(spec) * model_delta_norm_sq(spec);
    const double hsum = model_h_linf_sum(spec);
    const double g2 = model_g_l2_sq(spec);
    const double level_factor = 37.0 + 4.0 * control_level;
    const double c1 = 2.0 * u0_norm_sq + 8.0 * a2d2 * T * level_factor +
                      4.0 * T * level_factor * hsum + 2.0 * g2;
    const double c2 = 2.0 * (1.0 - 2.0 * spec.drift.gamma + 4.0 * a2d2 * level_factor);
    return c1 * std::exp(c2 * T);
}

}  // namespace latdev
