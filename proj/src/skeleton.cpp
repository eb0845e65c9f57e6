#include "latdev/skeleton.hpp"

#include <cmath>
#include <numbers>

#include "latdev/rng.hpp"
#include "latdev/stats.hpp"

namespace latdev {

Trajectory solve(const ModelSpec& spec, const TimeGrid& grid, const State& u0, const Control& v,
                 const SolveOptions& options) {
    if (u0.window != spec.window) throw DimensionMismatch("solve: u0 window mismatch");
    check_same_grid(v.grid, grid, "solve");
    if (v.modes() != spec.mode_count())
        throw DimensionMismatch("solve: control mode count mismatch");

    const double dt = grid.dt();
    const Polynomial f = spec.drift.f();
    Vector vm = Vector::Zero(v.modes());
    State mid = State::zero(spec.window);
    State k1 = mid, k2 = mid, k3 = mid, k4 = mid;
    auto rhs_into = [&](double t, const State& x, State& out) {
        drift_into(spec, f, t, x, out);
        sigma_apply_add(spec, t, x, vm, 1.0, out);
    };

    Trajectory path(grid, spec.window);
    State u = u0;
    path.set(0, u);
    for (int m = 0; m < grid.steps; ++m) {
        const double t = grid.node(m);
        if (v.modes() > 0) vm = v.values.row(m);
        rhs_into(t, u, k1);
        mid.values = u.values + 0.5 * dt * k1.values;
        rhs_into(t + 0.5 * dt, mid, k2);
        mid.values = u.values + 0.5 * dt * k2.values;
        rhs_into(t + 0.5 * dt, mid, k3);
        mid.values = u.values + dt * k3.values;
        rhs_into(t + dt, mid, k4);
        u.values += (dt / 6.0) * (k1.values + 2.0 * k2.values + 2.0 * k3.values + k4.values);
        if (!u.values.allFinite() || u.norm() > options.stability_radius)
            throw StepUnstable(m, "state left the stability ball of radius " +
                                      std::to_string(options.stability_radius));
        path.set(m + 1, u);
    }
    return path;
}

Trajectory solve_unforced(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                          const SolveOptions& options) {
    return solve(spec, grid, u0, Control(grid, spec.mode_count()), options);
}

double apriori_bound(const ModelSpec& spec, const State& u0, const Control& v) {
    const double T = spec.horizon;
    const double a2d2 = model_alpha(spec) * model_alpha(spec) * model_delta_norm_sq(spec);
    const double V = v.l2_sq();
    const double expo = std::exp((2.0 - 2.0 * spec.drift.gamma) * T + 4.0 * a2d2 * V);
    return expo * (u0.squared_norm() + 4.0 * a2d2 * V + model_g_l2_sq(spec) +
                   2.0 * model_h_linf_sum(spec) * V);
}

ContinuityReport continuity_check(const ModelSpec& spec, const TimeGrid& grid, const State& u01,
                                  const State& u02, const Control& v1, const Control& v2,
                                  const SolveOptions& options) {
    check_same_grid(v1.grid, v2.grid, "continuity_check");
    const Trajectory p1 = solve(spec, grid, u01, v1, options);
    const Trajectory p2 = solve(spec, grid, u02, v2, options);

    ContinuityReport rep;
    const double dist = sup_distance(p1, p2);
    rep.distance_sq = dist * dist;

    const double T = spec.horizon;
    const double alpha = model_alpha(spec);
    const double d2 = model_delta_norm_sq(spec);
    const double dnorm = std::sqrt(d2);
    const double hsum = model_h_linf_sum(spec);
    const double r2 = std::sqrt(std::max(v1.l2_sq(), v2.l2_sq()));
    const double c5 = model_sigma_lipschitz(spec);
    const double c4_sq = std::max(apriori_bound(spec, u01, v1), apriori_bound(spec, u02, v2));
    const double c6_sq = 2.0 * (1.0 + c4_sq);
    const double expo =
        std::exp((2.0 - 2.0 * spec.drift.gamma) * T + 2.0 * c5 * std::sqrt(T) * r2 * dnorm);
    const double vterm = c6_sq * alpha * alpha * d2 + hsum;

    const double du0_sq = (u01.values - u02.values).squaredNorm();
    const double dv_sq = (v1.values - v2.values).squaredNorm() * grid.dt();
    rep.input_gap_sq = du0_sq + dv_sq;
    rep.bound = expo * du0_sq + vterm * expo * dv_sq;
    rep.c1 = expo * std::max(1.0, vterm);
    rep.holds = rep.distance_sq <= rep.bound * (1.0 + 1e-9) + 1e-30;
    return rep;
}

std::vector<WeakProbeRow> weak_convergence_probe(const ModelSpec& spec, const TimeGrid& grid,
                                                 const State& u0, const Control& v,
                                                 const Vector& w, const std::vector<int>& n_list,
                                                 const SolveOptions& options) {
    check_same_grid(v.grid, grid, "weak_convergence_probe");
    if (w.size() != spec.mode_count())
        throw DimensionMismatch("weak_convergence_probe: w mode count mismatch");
    for (int n : n_list)
        if (n < 1 || grid.steps < 8 * n)
            throw ConfigError("oscillation n = " + std::to_string(n) +
                              " needs at least 8 steps per period (steps = " +
                              std::to_string(grid.steps) + ")");

    const Trajectory base = solve(spec, grid, u0, v, options);
    std::vector<WeakProbeRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        Control vn = v;
        for (int m = 0; m < grid.steps; ++m) {
            const double t_mid = grid.node(m) + 0.5 * grid.dt();
            const double s = std::sin(2.0 * std::numbers::pi * n * t_mid / spec.horizon);
            vn.values.row(m) += s * w.transpose();
        }
        rows.push_back({n, sup_distance(solve(spec, grid, u0, vn, options), base)});
    }
    return rows;
}

LevelSetReport level_set_probe(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                               double level, int sample_count, uint64_t seed, int threads,
                               const SolveOptions& options) {
    if (sample_count < 1) throw ConfigError("level_set_probe needs sample_count >= 1");
    if (level < 0.0) throw ConfigError("level must be >= 0");

    const int K = spec.mode_count();
    const CounterRng rng(seed);
    const double dt = grid.dt();

    LevelSetReport rep;
    rep.level = level;
    rep.samples = sample_count;

    // Random Fourier controls with a smoothness prior (amplitude ~ (1+j)^-2).
    // White-noise samples act weakly like the zero control and would collapse
    // the family; flat spectra scatter it beyond any finite net. The decaying
    // spectrum samples S_N the way paths actually feel controls.
    constexpr int kFrequencies = 5;
    std::vector<Trajectory> paths(static_cast<size_t>(sample_count));
    std::vector<double> l2s(static_cast<size_t>(sample_count), 0.0);
    parallel_for(sample_count, threads, [&](long i) {
        Control v(grid, K);
        if (level > 0.0 && K > 0) {
            std::vector<double> coef(static_cast<size_t>(2 * K));
            for (int j = 0; j < kFrequencies; ++j) {
                rng.fill_normals(static_cast<uint64_t>(i), static_cast<uint32_t>(j),
                                 RngPurpose::control_sampling, coef.data(), 2 * K);
                const double amp = 1.0 / ((1.0 + j) * (1.0 + j));
                const double omega = 2.0 * std::numbers::pi * j / spec.horizon;
                for (int m = 0; m < grid.steps; ++m) {
                    const double t = grid.node(m) + 0.5 * dt;
                    for (int k = 0; k < K; ++k)
                        v.values(m, k) +=
                            amp * (coef[static_cast<size_t>(2 * k)] * std::cos(omega * t) +
                                   coef[static_cast<size_t>(2 * k + 1)] * std::sin(omega * t));
                }
            }
            const double raw = dt * v.values.squaredNorm();
            const double target =
                level * rng.uniform(static_cast<uint64_t>(i), 0xFFFFFFFFu, 0,
                                    RngPurpose::control_sampling);
            if (raw > 0.0) v.values *= std::sqrt(target / raw);
        }
        l2s[static_cast<size_t>(i)] = v.l2_sq();
        paths[static_cast<size_t>(i)] = solve(spec, grid, u0, v, options);
    });

    for (double c : l2s) rep.max_control_l2_sq = std::max(rep.max_control_l2_sq, c);

    const int inner = spec.window.radius() / 2;
    rep.sample_modulus.resize(static_cast<size_t>(sample_count), 0.0);
    rep.sample_tail.resize(static_cast<size_t>(sample_count), 0.0);
    for (int i = 0; i < sample_count; ++i) {
        const Trajectory& p = paths[static_cast<size_t>(i)];
        double mod = 0.0, tail = 0.0;
        for (int m = 0; m < grid.steps; ++m)
            mod = std::max(mod, (p.states.row(m + 1) - p.states.row(m)).norm());
        for (int m = 0; m <= grid.steps; ++m) tail = std::max(tail, tail_mass(p.at(m), inner));
        rep.sample_modulus[static_cast<size_t>(i)] = mod;
        rep.sample_tail[static_cast<size_t>(i)] = tail;
        rep.modulus = std::max(rep.modulus, mod);
        rep.tail = std::max(rep.tail, tail);
    }

    // Greedy net in sample order; deterministic and order-independent of threads.
    std::vector<int> centers;
    rep.assignment.assign(static_cast<size_t>(sample_count), -1);
    for (int i = 0; i < sample_count; ++i) {
        int found = -1;
        for (size_t c = 0; c < centers.size(); ++c) {
            if (sup_distance(paths[static_cast<size_t>(i)],
                             paths[static_cast<size_t>(centers[c])]) <= rep.net_radius) {
                found = static_cast<int>(c);
                break;
            }
        }
        if (found < 0) {
            centers.push_back(i);
            found = static_cast<int>(centers.size()) - 1;
        }
        rep.assignment[static_cast<size_t>(i)] = found;
    }
    rep.net_size = static_cast<int>(centers.size());
    return rep;
}

}  // namespace latdev
