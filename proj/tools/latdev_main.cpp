// latdev: stochastic reaction-diffusion lattice dynamics, controlled skeleton
// equations, rate-function evaluation, and small-noise verification harness.
//
// Exit codes: 0 success, 1 usage/parse error, 2 model condition violated,
// 3 optimizer not converged under --strict.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latdev/bench.hpp"
#include "latdev/benchmarks.hpp"
#include "latdev/csv.hpp"
#include "latdev/json_io.hpp"
#include "latdev/version.hpp"

namespace fs = std::filesystem;
using namespace latdev;

namespace {

struct CliContext {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<uint64_t> seed_override;
    int threads = 1;
    bool strict = false;

    Json config;
    ModelSpec model;
    std::vector<std::string> outputs;
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
};

uint64_t fnv1a_hash(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string iso_time(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void load_config(CliContext& ctx) {
    if (const char* env = std::getenv("LATDEV_OUT_DIR"); env && ctx.out_dir == "out")
        ctx.out_dir = env;
    ctx.config = parse_json_file(ctx.config_path);
    const Json& model_field = require_field(ctx.config, "model", "config");
    if (model_field.is_string()) {
        const fs::path base = fs::path(ctx.config_path).parent_path();
        ctx.model = model_from_json(parse_json_file((base / model_field.get<std::string>()).string()));
    } else {
        ctx.model = model_from_json(model_field);
    }
    fs::create_directories(ctx.out_dir);
}

std::string out_path(CliContext& ctx, const std::string& name) {
    ctx.outputs.push_back(name);
    return (fs::path(ctx.out_dir) / name).string();
}

uint64_t master_seed(const CliContext& ctx) {
    if (ctx.seed_override) return *ctx.seed_override;
    if (!ctx.config.contains("seed"))
        throw ConfigError(
            "config: stochastic runs need a master 'seed' (wall-clock seeding is not supported)");
    return ctx.config.at("seed").get<uint64_t>();
}

void write_manifest(CliContext& ctx, const std::string& subcommand, const Json& params) {
    Json manifest = {
        {"artifact_version", LATDEV_VERSION},
        {"subcommand", subcommand},
        {"config_path", ctx.config_path},
        {"config_hash", fnv1a_hash(ctx.config.dump())},
        {"master_seed", ctx.config.contains("seed") || ctx.seed_override
                            ? Json(master_seed(ctx))
                            : Json(nullptr)},
        {"threads", ctx.threads},
        {"parameters", params},
        {"outputs", ctx.outputs},
        {"started_at", iso_time(ctx.started)},
        {"finished_at", iso_time(std::chrono::system_clock::now())},
    };
    write_json_file((fs::path(ctx.out_dir) / "manifest.json").string(), manifest);
}

State initial_state(const CliContext& ctx) {
    if (!ctx.config.contains("initial_state")) return State::zero(ctx.model.window);
    return state_from_json(ctx.config.at("initial_state"), ctx.model.window);
}

TimeGrid experiment_grid(const CliContext& ctx) {
    return grid_from_json(require_field(ctx.config, "grid", "config"), ctx.model.horizon);
}

SdeConfig sde_config(CliContext& ctx, const Json& section) {
    SdeConfig cfg;
    cfg.grid = experiment_grid(ctx);
    cfg.seed = master_seed(ctx);
    cfg.threads = ctx.threads;
    if (section.contains("eps")) cfg.eps = section.at("eps").get<double>();
    if (section.contains("ensemble")) cfg.ensemble_size = section.at("ensemble").get<long>();
    if (section.contains("sample_offset"))
        cfg.sample_offset = section.at("sample_offset").get<uint64_t>();
    if (section.contains("stability_radius"))
        cfg.stability_radius = section.at("stability_radius").get<double>();
    cfg.check();
    return cfg;
}

std::optional<Control> optional_control(const CliContext& ctx, const Json& section,
                                        const TimeGrid& grid) {
    if (!section.contains("control") || section.at("control").is_null()) return std::nullopt;
    return control_from_json(section.at("control"), grid, ctx.model.mode_count());
}

// ------------------------------------------------------------- subcommands

int cmd_validate(CliContext& ctx) {
    const double radius = ctx.config.contains("lipschitz_radius")
                              ? ctx.config.at("lipschitz_radius").get<double>()
                              : 5.0;
    const ValidationReport rep = validate(ctx.model, radius);
    const Json j = to_json(rep);
    write_json_file(out_path(ctx, "validation.json"), j);
    std::cout << j.dump(2) << "\n";
    write_manifest(ctx, "validate", {{"lipschitz_radius", radius}});
    if (!rep.valid) {
        for (const ValidationIssue& v : rep.violations)
            std::cerr << "condition violated [" << v.condition << "]: " << v.message << "\n";
        return 2;
    }
    return 0;
}

int cmd_simulate(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "simulate", "config");
    const SdeConfig cfg = sde_config(ctx, section);
    const State u0 = initial_state(ctx);
    const std::optional<Control> control = optional_control(ctx, section, cfg.grid);

    std::vector<double> sup_norm(static_cast<size_t>(cfg.ensemble_size));
    std::vector<double> terminal(static_cast<size_t>(cfg.ensemble_size));
    std::vector<double> sup_sq(static_cast<size_t>(cfg.ensemble_size));
    parallel_for(cfg.ensemble_size, ctx.threads, [&](long i) {
        const Trajectory t = simulate(ctx.model, cfg, u0, control, static_cast<uint64_t>(i));
        sup_norm[static_cast<size_t>(i)] = t.sup_norm();
        sup_sq[static_cast<size_t>(i)] = t.sup_norm_sq();
        terminal[static_cast<size_t>(i)] = t.states.row(t.grid.steps).norm();
    });

    CsvTable samples({"sample", "sup_norm", "sup_norm_sq", "terminal_norm"});
    for (long i = 0; i < cfg.ensemble_size; ++i)
        samples.cell(i).cell(sup_norm[static_cast<size_t>(i)]).cell(sup_sq[static_cast<size_t>(i)])
            .cell(terminal[static_cast<size_t>(i)]);
    samples.write(out_path(ctx, "samples.csv"));

    if (section.value("write_trajectories", false)) {
        Json paths = Json::array();
        const long limit = std::min<long>(cfg.ensemble_size, 64);
        for (long i = 0; i < limit; ++i)
            paths.push_back(to_json(simulate(ctx.model, cfg, u0, control, i)));
        write_json_file(out_path(ctx, "trajectories.json"), paths);
    }

    const MeanCI mom = moment_sup_sq(sup_sq);
    const Json summary = {{"eps", cfg.eps},
                          {"ensemble", cfg.ensemble_size},
                          {"moment_sup_sq",
                           {{"mean", mom.mean},
                            {"ci_low", mom.ci_low},
                            {"ci_high", mom.ci_high},
                            {"std_error", mom.std_error}}},
                          {"gronwall_bound",
                           gronwall_moment_bound(ctx.model, u0.squared_norm(),
                                                 control ? control->l2_sq() : 0.0)}};
    write_json_file(out_path(ctx, "summary.json"), summary);
    std::cout << summary.dump(2) << "\n";
    write_manifest(ctx, "simulate", section);
    return 0;
}

int cmd_skeleton(CliContext& ctx) {
    const Json section = ctx.config.value("skeleton", Json::object());
    const TimeGrid grid = experiment_grid(ctx);
    const State u0 = initial_state(ctx);
    Control v(grid, ctx.model.mode_count());
    if (const auto c = optional_control(ctx, section, grid)) v = *c;
    SolveOptions options;
    if (section.contains("stability_radius"))
        options.stability_radius = section.at("stability_radius").get<double>();

    const Trajectory path = solve(ctx.model, grid, u0, v, options);

    CsvTable table([&] {
        std::vector<std::string> cols{"t"};
        for (long i = 0; i < ctx.model.window.site_count(); ++i)
            cols.push_back("u" + std::to_string(i));
        cols.push_back("norm");
        return cols;
    }());
    for (int m = 0; m <= grid.steps; ++m) {
        table.cell(grid.node(m));
        for (long i = 0; i < ctx.model.window.site_count(); ++i) table.cell(path.states(m, i));
        table.cell(path.states.row(m).norm());
    }
    table.write(out_path(ctx, "trajectory.csv"));

    const Json summary = {{"sup_norm", path.sup_norm()},
                          {"control_cost", v.cost()},
                          {"apriori_bound", apriori_bound(ctx.model, u0, v)}};
    write_json_file(out_path(ctx, "summary.json"), summary);
    std::cout << summary.dump(2) << "\n";
    write_manifest(ctx, "skeleton", section);
    return 0;
}

int cmd_rate(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "rate", "config");
    const TimeGrid grid = experiment_grid(ctx);
    const State u0 = initial_state(ctx);

    Trajectory phi;
    const Json& target = require_field(section, "target", "config.rate");
    const std::string kind = target.value("kind", "nodes");
    if (kind == "unforced") {
        phi = solve_unforced(ctx.model, grid, u0);
    } else if (kind == "linear") {
        const State endpoint =
            state_from_json(require_field(target, "endpoint", "config.rate.target"),
                            ctx.model.window);
        phi = Trajectory(grid, ctx.model.window);
        for (int m = 0; m <= grid.steps; ++m) {
            const double s = grid.node(m) / grid.horizon;
            phi.states.row(m) =
                ((1.0 - s) * u0.values + s * endpoint.values).transpose();
        }
    } else if (kind == "file") {
        const fs::path base = fs::path(ctx.config_path).parent_path();
        phi = trajectory_from_json(parse_json_file(
            (base / require_field(target, "path", "config.rate.target").get<std::string>())
                .string()));
    } else {
        phi = trajectory_from_json(target);
    }
    if (phi.grid != grid)
        throw ConfigError("rate.target grid does not match the experiment grid (" +
                          std::to_string(phi.grid.steps) + " vs " + std::to_string(grid.steps) +
                          " steps)");

    RateOptions options;
    if (section.contains("penalties"))
        options.penalties = section.at("penalties").get<std::vector<double>>();
    if (section.contains("grad_tol")) options.grad_tol = section.at("grad_tol").get<double>();
    if (section.contains("residual_tol"))
        options.residual_tol = section.at("residual_tol").get<double>();
    if (section.contains("max_iterations"))
        options.max_iterations = section.at("max_iterations").get<int>();

    std::vector<IterationRecord> trace;
    const RateEstimate est = rate_estimate(ctx.model, u0, phi, options, &trace);

    Json j = to_json(est);
    bool oracle_applicable = true;
    for (const ModeSpec& m : ctx.model.noise.modes)
        if (m.sigma0.kind != Sigma0::Kind::zero) oracle_applicable = false;
    if (oracle_applicable) {
        const RateEstimate oracle = additive_oracle(ctx.model, u0, phi);
        j["additive_oracle"] = {{"cost", oracle.feasible ? Json(oracle.cost) : Json("infinity")},
                                {"feasible", oracle.feasible},
                                {"residual", oracle.residual}};
    }
    write_json_file(out_path(ctx, "rate.json"), j);

    CsvTable conv({"stage", "penalty", "iterations", "objective", "grad_norm", "cost", "residual"});
    for (const IterationRecord& r : trace)
        conv.cell(r.stage).cell(r.penalty).cell(r.iterations).cell(r.objective).cell(r.grad_norm)
            .cell(r.cost).cell(r.residual);
    conv.write(out_path(ctx, "convergence.csv"));

    std::cout << j.dump(2) << "\n";
    write_manifest(ctx, "rate", section);
    return (!est.converged && ctx.strict) ? 3 : 0;
}

int cmd_endpoint_rate(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "event", "config");
    const TimeGrid grid = experiment_grid(ctx);
    const State u0 = initial_state(ctx);
    if (section.value("kind", "") != std::string("endpoint_halfspace"))
        throw ConfigError("endpoint-rate requires an endpoint_halfspace event");
    const State c = state_from_json(require_field(section, "c", "config.event"),
                                    ctx.model.window);
    const double level = require_number(section, "level", "config.event");

    RateOptions options;
    options.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
    if (ctx.config.contains("rate") && ctx.config.at("rate").contains("penalties"))
        options.penalties = ctx.config.at("rate").at("penalties").get<std::vector<double>>();

    const RateEstimate est = endpoint_rate(ctx.model, grid, u0, c, level, options);
    const Json j = to_json(est);
    write_json_file(out_path(ctx, "endpoint_rate.json"), j);
    std::cout << j.dump(2) << "\n";
    write_manifest(ctx, "endpoint-rate", section);
    return (!est.converged && ctx.strict) ? 3 : 0;
}

int cmd_ldp_curve(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "ldp", "config");
    SdeConfig cfg = sde_config(ctx, section);
    const State u0 = initial_state(ctx);
    const EventSpec event =
        event_from_json(require_field(ctx.config, "event", "config"), ctx.model, cfg.grid);

    const std::vector<double> eps_list =
        require_field(section, "eps_list", "config.ldp").get<std::vector<double>>();
    std::vector<long> ensembles;
    if (section.contains("ensemble_list"))
        ensembles = section.at("ensemble_list").get<std::vector<long>>();

    std::optional<Control> tilt;
    if (section.contains("importance_sampling")) {
        const Json& is = section.at("importance_sampling");
        if (is.value("enabled", false))
            tilt = control_from_json(require_field(is, "control", "config.ldp.importance_sampling"),
                                     cfg.grid, ctx.model.mode_count());
    }

    // Rate reference for the comparison column: inf I over the event, from
    // the optimizer, for endpoint events.
    double rate_reference = std::numeric_limits<double>::quiet_NaN();
    const Json& event_json = ctx.config.at("event");
    if (event_json.value("kind", "") == std::string("endpoint_halfspace")) {
        RateOptions ropt;
        ropt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
        rate_reference = endpoint_rate(ctx.model, cfg.grid, u0,
                                       state_from_json(event_json.at("c"), ctx.model.window),
                                       event_json.at("level").get<double>(), ropt)
                             .cost;
    }

    const auto rows = ldp_curve(ctx.model, cfg, u0, event, eps_list, ensembles, tilt);
    CsvTable csv({"eps", "p_hat", "ci_low", "ci_high", "minus_eps_log_p", "rate_reference",
                  "hits", "ensemble", "censored"});
    for (const auto& r : rows)
        csv.cell(r.eps).cell(r.p_hat).cell(r.ci_low).cell(r.ci_high).cell(r.minus_eps_log_p)
            .cell(rate_reference).cell(r.hits).cell(r.ensemble)
            .cell(std::string(r.censored ? "1" : "0"));
    csv.write(out_path(ctx, "curve.csv"));
    std::cout << csv.to_string();
    write_manifest(ctx, "ldp-curve", section);
    return 0;
}

TerminalObjective terminal_objective(const CliContext& ctx, const Json& fj) {
    const std::string kind = require_field(fj, "kind", "laplace.functional").get<std::string>();
    TerminalObjective obj;
    if (kind == "terminal_norm_sq") {
        obj.value = [](const State& uT) { return uT.values.squaredNorm(); };
        obj.gradient = [](const State& uT) -> Vector { return 2.0 * uT.values; };
        return obj;
    }
    if (kind == "terminal_linear_sq") {
        const State c = state_from_json(require_field(fj, "c", "laplace.functional"),
                                        ctx.model.window);
        const double shift = fj.value("shift", 0.0);
        obj.value = [c, shift](const State& uT) {
            const double s = c.values.dot(uT.values) - shift;
            return s * s;
        };
        obj.gradient = [c, shift](const State& uT) -> Vector {
            return (2.0 * (c.values.dot(uT.values) - shift)) * c.values;
        };
        return obj;
    }
    throw ConfigError("unknown laplace functional kind '" + kind + "'");
}

int cmd_laplace(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "laplace", "config");
    const State u0 = initial_state(ctx);
    const Json& fj = require_field(section, "functional", "config.laplace");
    const TerminalObjective obj = terminal_objective(ctx, fj);
    auto functional = [&obj](const Trajectory& path) {
        return obj.value(path.at(path.grid.steps));
    };

    const std::vector<double> eps_list =
        require_field(section, "eps_list", "config.laplace").get<std::vector<double>>();
    std::vector<long> ensembles(eps_list.size(), 100000);
    if (section.contains("ensemble_list"))
        ensembles = section.at("ensemble_list").get<std::vector<long>>();

    CsvTable csv({"eps", "value", "ci_half", "ensemble"});
    for (size_t i = 0; i < eps_list.size(); ++i) {
        SdeConfig cfg = sde_config(ctx, section);
        cfg.eps = eps_list[i];
        cfg.ensemble_size = ensembles[i];
        const LaplaceResult r = laplace_functional(ctx.model, cfg, u0, functional);
        csv.cell(r.eps).cell(r.value).cell(r.ci_half).cell(r.ensemble);
    }
    csv.write(out_path(ctx, "laplace.csv"));

    RateOptions options;
    const LaplaceInfResult inf =
        laplace_inf(ctx.model, experiment_grid(ctx), u0, obj, options);
    const Json j = {{"inf_h_plus_rate", inf.value},
                    {"terminal_value", inf.terminal},
                    {"control_cost", inf.cost},
                    {"converged", inf.converged},
                    {"iterations", inf.iterations}};
    write_json_file(out_path(ctx, "laplace.json"), j);
    std::cout << csv.to_string() << j.dump(2) << "\n";
    write_manifest(ctx, "laplace", section);
    return (!inf.converged && ctx.strict) ? 3 : 0;
}

int cmd_probe_weak(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "probe_weak", "config");
    const TimeGrid grid = experiment_grid(ctx);
    const State u0 = initial_state(ctx);
    Control v(grid, ctx.model.mode_count());
    if (const auto c = optional_control(ctx, section, grid)) v = *c;
    const std::vector<double> wvec =
        require_field(section, "w", "config.probe_weak").get<std::vector<double>>();
    Vector w(wvec.size());
    for (size_t i = 0; i < wvec.size(); ++i) w[static_cast<long>(i)] = wvec[i];
    const std::vector<int> n_list =
        require_field(section, "n_list", "config.probe_weak").get<std::vector<int>>();

    const auto rows = weak_convergence_probe(ctx.model, grid, u0, v, w, n_list);
    CsvTable csv({"n", "distance"});
    for (const auto& r : rows) csv.cell(r.n).cell(r.distance);
    csv.write(out_path(ctx, "weak.csv"));
    std::cout << csv.to_string();
    write_manifest(ctx, "probe-weak", section);
    return 0;
}

int cmd_probe_compact(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "probe_compact", "config");
    const TimeGrid grid = experiment_grid(ctx);
    const State u0 = initial_state(ctx);
    const double level = require_number(section, "level", "config.probe_compact");
    const int samples = static_cast<int>(require_number(section, "samples", "config.probe_compact"));

    const LevelSetReport rep =
        level_set_probe(ctx.model, grid, u0, level, samples, master_seed(ctx), ctx.threads);
    CsvTable csv({"sample", "modulus", "tail", "net_center"});
    for (size_t i = 0; i < rep.assignment.size(); ++i)
        csv.cell(static_cast<long>(i)).cell(rep.sample_modulus[i]).cell(rep.sample_tail[i])
            .cell(rep.assignment[i]);
    csv.write(out_path(ctx, "compact_samples.csv"));

    const Json j = {{"level", rep.level},         {"samples", rep.samples},
                    {"modulus", rep.modulus},     {"tail", rep.tail},
                    {"net_size", rep.net_size},   {"net_radius", rep.net_radius},
                    {"max_control_l2_sq", rep.max_control_l2_sq}};
    write_json_file(out_path(ctx, "compact.json"), j);
    std::cout << j.dump(2) << "\n";
    write_manifest(ctx, "probe-compact", section);
    return 0;
}

int cmd_probe_h1(CliContext& ctx) {
    const Json& section = require_field(ctx.config, "h1", "config");
    SdeConfig cfg = sde_config(ctx, section);
    const State u0 = initial_state(ctx);
    Control v(cfg.grid, ctx.model.mode_count());
    if (const auto c = optional_control(ctx, section, cfg.grid)) v = *c;
    const std::vector<double> eps_list =
        require_field(section, "eps_list", "config.h1").get<std::vector<double>>();
    const long ensemble = section.value("ensemble", 1000L);

    const auto rows = h1_probe(ctx.model, cfg, u0, v, eps_list, ensemble);
    CsvTable csv({"eps", "mean_distance", "ci_low", "ci_high"});
    for (const auto& r : rows)
        csv.cell(r.eps).cell(r.distance.mean).cell(r.distance.ci_low).cell(r.distance.ci_high);
    csv.write(out_path(ctx, "h1.csv"));
    std::cout << csv.to_string();
    write_manifest(ctx, "probe-h1", section);
    return 0;
}

int cmd_bench(const std::string& out_dir, uint64_t seed, int threads, bool self_test) {
    bench::BenchOptions options;
    options.seed = seed;
    options.threads = threads;
    options.self_test = self_test;
    const auto results = bench::run_acceptance(options);
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "bench_summary.csv", std::ios::binary);
    out << bench::summary_csv(results);
    int failures = 0;
    for (const auto& r : results) failures += r.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    // Self-test succeeds exactly when the corrupted tolerance produced the
    // single expected failure.
    if (self_test) return failures == 1 ? 0 : 4;
    return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic reaction-diffusion lattice toolkit"};
    app.require_subcommand(1);

    CliContext ctx;
    uint64_t seed_flag = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", ctx.config_path, "experiment config JSON")->required();
        cmd->add_option("--out", ctx.out_dir, "output directory");
        cmd->add_option("--seed", seed_flag, "override the master seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--threads", ctx.threads, "worker threads (speed only, never values)");
        cmd->add_flag("--strict", ctx.strict, "non-zero exit when an optimizer did not converge");
    };

    struct Handler {
        std::string description;
        std::function<int(CliContext&)> fn;
    };
    std::map<std::string, Handler> handlers = {
        {"validate", {"check the model's structural conditions", cmd_validate}},
        {"simulate", {"Euler-Maruyama ensemble with per-sample summaries", cmd_simulate}},
        {"skeleton", {"deterministic controlled-equation solve (RK4)", cmd_skeleton}},
        {"rate", {"action of a target path by penalty continuation", cmd_rate}},
        {"endpoint-rate", {"inf of the action over an endpoint half-space", cmd_endpoint_rate}},
        {"ldp-curve", {"-eps log p of an event across noise levels", cmd_ldp_curve}},
        {"laplace", {"-eps log E exp(-H/eps) plus the variational companion", cmd_laplace}},
        {"probe-weak", {"solution map under oscillatory weak-null controls", cmd_probe_weak}},
        {"probe-compact", {"equicontinuity/tail/net diagnostics of a level set", cmd_probe_compact}},
        {"probe-h1", {"controlled SDE vs skeleton distance as eps -> 0", cmd_probe_h1}},
    };
    std::map<std::string, CLI::App*> subcommands;
    for (const auto& [name, handler] : handlers) {
        CLI::App* cmd = app.add_subcommand(name, handler.description);
        add_common(cmd);
        subcommands[name] = cmd;
    }

    CLI::App* bench_cmd = app.add_subcommand("bench", "run the verification battery");
    std::string bench_out = "out";
    uint64_t bench_seed = 20260808ull;
    int bench_threads = 2;
    bool bench_self_test = false;
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("--seed", bench_seed, "master seed");
    bench_cmd->add_option("--threads", bench_threads, "worker threads");
    bench_cmd->add_flag("--self-test", bench_self_test,
                        "run the harness self-check (one deliberately failing criterion)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench_cmd->parsed())
            return cmd_bench(bench_out, bench_seed, bench_threads, bench_self_test);
        if (seed_set) ctx.seed_override = seed_flag;
        for (const auto& [name, handler] : handlers) {
            if (subcommands[name]->parsed()) {
                load_config(ctx);
                return handler.fn(ctx);
            }
        }
    } catch (const ConditionViolated& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
