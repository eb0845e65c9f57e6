#include "latdev/ldp.hpp"

#include <cmath>

#include "latdev/rng.hpp"

namespace latdev {

bool EventSpec::contains(const Trajectory& path) const {
    switch (kind) {
        case Kind::always:
            return true;
        case Kind::endpoint_halfspace:
            return c.values.dot(path.states.row(path.grid.steps).transpose()) >= level;
        case Kind::supball_exit: {
            return sup_distance(path, phi_ref) > level;
        }
    }
    return false;
}

EventSpec EventSpec::endpoint_halfspace(State c, double level) {
    EventSpec e;
    e.kind = Kind::endpoint_halfspace;
    e.c = std::move(c);
    e.level = level;
    return e;
}

EventSpec EventSpec::supball_exit(Trajectory phi_ref, double level) {
    EventSpec e;
    e.kind = Kind::supball_exit;
    e.phi_ref = std::move(phi_ref);
    e.level = level;
    return e;
}

EventSpec EventSpec::always() { return EventSpec{}; }

TailResult tail_probability(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                            const EventSpec& event, const std::optional<Control>& tilt) {
    TailResult out;
    if (!tilt) {
        const std::vector<double> hits_vec =
            ensemble_map(spec, config, u0, std::nullopt, [&event](const Trajectory& path) {
                return event.contains(path) ? 1.0 : 0.0;
            });
        long hits = 0;
        for (double h : hits_vec) hits += h > 0.5 ? 1 : 0;
        out.plain = proportion_ci(hits, config.ensemble_size);
        out.p_hat = out.plain.p_hat;
        out.ci_low = out.plain.ci_low;
        out.ci_high = out.plain.ci_high;
        out.zero_hits = out.plain.zero_hits;
        return out;
    }

    // Girsanov-tilted estimator: simulate the shifted system and reweight by
    // exp(-eps^{-1/2} sum v.dW - (2eps)^{-1} sum |v|^2 dt).
    if (config.eps <= 0.0) throw ConfigError("importance sampling requires eps > 0");
    check_same_grid(tilt->grid, config.grid, "tail_probability");
    const int K = spec.mode_count();
    const double dt = config.grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    const CounterRng rng(config.seed);

    std::vector<double> weighted(static_cast<size_t>(config.ensemble_size), 0.0);
    std::vector<char> hit(static_cast<size_t>(config.ensemble_size), 0);
    parallel_for(config.ensemble_size, config.threads, [&](long i) {
        const Trajectory path = simulate(spec, config, u0, tilt, static_cast<uint64_t>(i));
        if (!event.contains(path)) return;
        hit[static_cast<size_t>(i)] = 1;
        const uint64_t sample = config.sample_offset + static_cast<uint64_t>(i);
        std::vector<double> z(static_cast<size_t>(K));
        double log_w = 0.0;
        for (int m = 0; m < config.grid.steps; ++m) {
            rng.fill_normals(sample, static_cast<uint32_t>(m), RngPurpose::sde_noise, z.data(),
                             K);
            const Vector vm = tilt->at_step(m);
            double vdw = 0.0;
            for (int k = 0; k < K; ++k) vdw += vm[k] * sqrt_dt * z[static_cast<size_t>(k)];
            log_w += -vdw / std::sqrt(config.eps) - 0.5 * dt * vm.squaredNorm() / config.eps;
        }
        weighted[static_cast<size_t>(i)] = std::exp(log_w);
    });

    long hits = 0;
    for (char h : hit) hits += h;
    const MeanCI ci = mean_ci(weighted);
    out.importance_sampled = true;
    out.p_hat = ci.mean;
    out.ci_low = std::max(0.0, ci.ci_low);
    out.ci_high = ci.ci_high;
    out.zero_hits = hits == 0;
    out.plain = proportion_ci(hits, config.ensemble_size);
    return out;
}

std::vector<LdpCurveRow> ldp_curve(const ModelSpec& spec, const SdeConfig& base_config,
                                   const State& u0, const EventSpec& event,
                                   const std::vector<double>& eps_list,
                                   const std::vector<long>& ensemble_sizes,
                                   const std::optional<Control>& tilt) {
    if (!ensemble_sizes.empty() && ensemble_sizes.size() != eps_list.size())
        throw ConfigError("ensemble_sizes must be empty or match eps_list");
    std::vector<LdpCurveRow> rows;
    rows.reserve(eps_list.size());
    for (size_t j = 0; j < eps_list.size(); ++j) {
        SdeConfig cfg = base_config;
        cfg.eps = eps_list[j];
        if (!ensemble_sizes.empty()) cfg.ensemble_size = ensemble_sizes[j];
        const TailResult tr = tail_probability(spec, cfg, u0, event, tilt);
        LdpCurveRow row;
        row.eps = cfg.eps;
        row.p_hat = tr.p_hat;
        row.ci_low = tr.ci_low;
        row.ci_high = tr.ci_high;
        row.hits = tr.plain.hits;
        row.ensemble = cfg.ensemble_size;
        row.censored = tr.zero_hits;
        row.minus_eps_log_p = tr.zero_hits ? std::numeric_limits<double>::infinity()
                                           : -cfg.eps * std::log(tr.p_hat);
        rows.push_back(row);
    }
    return rows;
}

LaplaceResult laplace_functional(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                                 const std::function<double(const Trajectory&)>& functional) {
    const std::vector<double> scaled =
        ensemble_map(spec, config, u0, std::nullopt, [&](const Trajectory& path) {
            return -functional(path) / config.eps;
        });
    LaplaceResult out;
    out.eps = config.eps;
    out.ensemble = config.ensemble_size;
    const double lme = log_mean_exp(scaled);
    out.value = -config.eps * lme;

    // Delta-method interval: Var(Z)/ (n mean(Z)^2) computed in log space.
    std::vector<double> doubled(scaled.size());
    for (size_t i = 0; i < scaled.size(); ++i) doubled[i] = 2.0 * scaled[i];
    const double log_m2 = log_mean_exp(doubled);
    const double ratio = std::exp(log_m2 - 2.0 * lme);  // E[Z^2]/E[Z]^2 >= 1
    const double rel_se = std::sqrt(std::max(0.0, ratio - 1.0) / scaled.size());
    out.ci_half = config.eps * 1.959963984540054 * rel_se;
    return out;
}

LaplaceInfResult laplace_inf(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                             const TerminalObjective& objective, const RateOptions& options) {
    const RateEstimate est = minimize_terminal(spec, grid, u0, objective, false, options);
    LaplaceInfResult out;
    out.cost = est.cost;
    out.converged = est.converged;
    out.iterations = est.iterations;

    SdeConfig cfg;
    cfg.eps = 0.0;
    cfg.grid = grid;
    // Terminal state under the optimal control (deterministic Euler pass).
    const Trajectory path = simulate(spec, cfg, u0, est.control);
    out.terminal = objective.value(path.at(grid.steps));
    out.value = out.terminal + out.cost;
    return out;
}

std::vector<H1ProbeRow> h1_probe(const ModelSpec& spec, const SdeConfig& base_config,
                                 const State& u0, const Control& v,
                                 const std::vector<double>& eps_list, long ensemble) {
    const Trajectory skeleton_path = solve(spec, base_config.grid, u0, v);
    std::vector<H1ProbeRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        SdeConfig cfg = base_config;
        cfg.eps = eps;
        cfg.ensemble_size = ensemble;
        const std::vector<double> dists =
            ensemble_map(spec, cfg, u0, v, [&skeleton_path](const Trajectory& path) {
                return sup_distance(path, skeleton_path);
            });
        rows.push_back({eps, mean_ci(dists)});
    }
    return rows;
}

}  // namespace latdev
