#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <algorithm>
#include <cmath>
#include <string>

#include "latdev/benchmarks.hpp"
#include "latdev/json_io.hpp"

namespace fs = std::filesystem;
using namespace latdev;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path() / "latdev_cli_out.txt";
    const std::string cmd =
        std::string(LATDEV_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string cfg(const std::string& name) {
    return std::string(LATDEV_CONFIG_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("bundled model configs match the built-in benchmarks") {
    const ModelSpec ou_file = model_from_json(parse_json_file(cfg("ou_additive.json")));
    CHECK(to_json(ou_file) == to_json(bench::ou_additive()));
    const ModelSpec tanh_file = model_from_json(parse_json_file(cfg("tanh_lattice.json")));
    CHECK(to_json(tanh_file) == to_json(bench::tanh_lattice()));
}

TEST_CASE("validate: valid config exits 0 and reports the constants") {
    const fs::path out = fresh_dir("latdev_t_validate");
    const RunResult r =
        run_cli("validate --config " + cfg("validate_cubic.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const Json rep = parse_json_file((out / "validation.json").string());
    CHECK(rep.at("valid").get<bool>());
    CHECK(rep.at("alpha").get<double>() == doctest::Approx(0.5));
    CHECK(rep.at("delta_norm_sq").get<double>() == doctest::Approx(1.25));
    CHECK(rep.at("f_lipschitz").get<double>() > 0.0);
    // manifest written and lists the output file
    const Json manifest = parse_json_file((out / "manifest.json").string());
    CHECK(manifest.at("subcommand") == "validate");
    bool listed = false;
    for (const auto& f : manifest.at("outputs"))
        if (f == "validation.json") listed = true;
    CHECK(listed);
}

TEST_CASE("validate: gamma above the infimum exits 2 naming F1") {
    const fs::path out = fresh_dir("latdev_t_invalid");
    const RunResult r =
        run_cli("validate --config " + cfg("invalid_gamma.json") + " --out " + out.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("F1") != std::string::npos);
    CHECK(r.output.find("F0'(s) >= gamma") != std::string::npos);
}

TEST_CASE("malformed JSON exits 1 with a parse diagnostic") {
    const fs::path out = fresh_dir("latdev_t_parse");
    const fs::path broken = out / "broken.json";
    std::ofstream(broken) << "{ \"model\": ";
    const RunResult r =
        run_cli("validate --config " + broken.string() + " --out " + out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("parse error") != std::string::npos);
}

TEST_CASE("missing seed on a stochastic run is a config error") {
    const fs::path out = fresh_dir("latdev_t_noseed");
    const fs::path noseed = out / "noseed.json";
    Json config = parse_json_file(cfg("simulate_ou.json"));
    config.erase("seed");
    config["model"] = parse_json_file(cfg("ou_additive.json"));
    write_json_file(noseed.string(), config);
    const RunResult r =
        run_cli("simulate --config " + noseed.string() + " --out " + out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("seed") != std::string::npos);
}

TEST_CASE("simulate: deterministic CSV across thread counts and reruns") {
    const fs::path out1 = fresh_dir("latdev_t_sim1");
    const fs::path out2 = fresh_dir("latdev_t_sim2");
    const fs::path out3 = fresh_dir("latdev_t_sim3");
    const std::string base = "simulate --config " + cfg("simulate_ou.json");
    CHECK(run_cli(base + " --threads 1 --out " + out1.string()).exit_code == 0);
    CHECK(run_cli(base + " --threads 2 --out " + out2.string()).exit_code == 0);
    CHECK(run_cli(base + " --threads 2 --out " + out3.string()).exit_code == 0);
    const std::string csv1 = slurp(out1 / "samples.csv");
    CHECK(!csv1.empty());
    CHECK(csv1 == slurp(out2 / "samples.csv"));
    CHECK(csv1 == slurp(out3 / "samples.csv"));

    // --seed overrides the config seed and changes the numbers
    const fs::path out4 = fresh_dir("latdev_t_sim4");
    CHECK(run_cli(base + " --seed 7 --out " + out4.string()).exit_code == 0);
    CHECK(csv1 != slurp(out4 / "samples.csv"));
}

TEST_CASE("skeleton: decay trajectory written with summary") {
    const fs::path out = fresh_dir("latdev_t_skel");
    const RunResult r =
        run_cli("skeleton --config " + cfg("skeleton_decay.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const Json summary = parse_json_file((out / "summary.json").string());
    CHECK(summary.at("sup_norm").get<double>() == doctest::Approx(1.0));
    CHECK(summary.at("apriori_bound").get<double>() >= 1.0);
    const std::string csv = slurp(out / "trajectory.csv");
    CHECK(csv.find("t,u0,norm") == 0);
}

TEST_CASE("rate: bundled ramp benchmark reproduces 7/6") {
    const fs::path out = fresh_dir("latdev_t_rate");
    const RunResult r = run_cli("rate --config " + cfg("rate_ramp.json") + " --out " +
                                out.string() + " --strict");
    CHECK(r.exit_code == 0);
    const Json rate = parse_json_file((out / "rate.json").string());
    CHECK(rate.at("converged").get<bool>());
    CHECK(rate.at("cost").get<double>() == doctest::Approx(7.0 / 6.0).epsilon(0.02));
    CHECK(rate.at("additive_oracle").at("cost").get<double>() ==
          doctest::Approx(7.0 / 6.0).epsilon(0.01));
    CHECK(!slurp(out / "convergence.csv").empty());
}

TEST_CASE("probe-weak: distances decay") {
    const fs::path out = fresh_dir("latdev_t_weak");
    const RunResult r =
        run_cli("probe-weak --config " + cfg("probe_weak_ou.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out / "weak.csv");
    CHECK(csv.find("n,distance") == 0);
    // 5 rows + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("probe-compact: per-sample diagnostics written") {
    const fs::path out = fresh_dir("latdev_t_compact");
    Json config = parse_json_file(cfg("probe_compact_tanh.json"));
    config["model"] = parse_json_file(cfg("tanh_lattice.json"));
    config["probe_compact"]["samples"] = 16;
    const fs::path small = out / "small.json";
    write_json_file(small.string(), config);
    const RunResult r =
        run_cli("probe-compact --config " + small.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const Json rep = parse_json_file((out / "compact.json").string());
    CHECK(rep.at("net_size").get<int>() >= 1);
    CHECK(rep.at("max_control_l2_sq").get<double>() <= 4.0 + 1e-9);
    const std::string csv = slurp(out / "compact_samples.csv");
    CHECK(csv.find("sample,modulus,tail,net_center") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}

TEST_CASE("endpoint-rate reproduces the closed-form value") {
    const fs::path out = fresh_dir("latdev_t_ep");
    const RunResult r =
        run_cli("endpoint-rate --config " + cfg("endpoint_ou.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const Json j = parse_json_file((out / "endpoint_rate.json").string());
    const double exact = 1.0 / (1.0 - std::exp(-2.0));
    CHECK(j.at("cost").get<double>() == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("ldp-curve with importance sampling enabled") {
    const fs::path out = fresh_dir("latdev_t_is");
    Json config = parse_json_file(cfg("ldp_curve_ou.json"));
    config["model"] = parse_json_file(cfg("ou_additive.json"));
    config["ldp"]["eps_list"] = {0.2};
    config["ldp"]["ensemble_list"] = {20000};
    config["ldp"]["importance_sampling"] = {
        {"enabled", true}, {"control", {{"kind", "constant"}, {"value", {1.4}}}}};
    const fs::path is_cfg = out / "is.json";
    write_json_file(is_cfg.string(), config);
    const RunResult r =
        run_cli("ldp-curve --config " + is_cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out / "curve.csv");
    CHECK(csv.find("rate_reference") != std::string::npos);
    // weighted estimate lands near the Gaussian value Q(1/sqrt(eps s^2))
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double p_exact = 0.5 * std::erfc(1.0 / std::sqrt(0.2 * s_sq) / std::sqrt(2.0));
    const size_t line = csv.find('\n') + 1;
    const double p_hat = std::stod(csv.substr(csv.find(',', line) + 1));
    CHECK(std::abs(p_hat - p_exact) < 0.2 * p_exact);
}

TEST_CASE("unknown subcommand and missing config fail cleanly") {
    CHECK(run_cli("frobnicate").exit_code != 0);
    CHECK(run_cli("validate --config /nonexistent.json").exit_code == 1);
}

TEST_CASE("bench self-test reports exactly one failure") {
    const fs::path out = fresh_dir("latdev_t_selftest");
    const RunResult r = run_cli("bench --self-test --out " + out.string());
    CHECK(r.exit_code == 0);
    size_t fails = 0, pos = 0;
    while ((pos = r.output.find("[FAIL]", pos)) != std::string::npos) {
        ++fails;
        pos += 6;
    }
    CHECK(fails == 1);
    const std::string summary = slurp(out / "bench_summary.csv");
    CHECK(!summary.empty());

    // repeated run with the same seed: byte-identical summary
    const fs::path out2 = fresh_dir("latdev_t_selftest2");
    CHECK(run_cli("bench --self-test --out " + out2.string()).exit_code == 0);
    CHECK(slurp(out2 / "bench_summary.csv") == summary);
}

TEST_CASE("laplace: MC curve and variational companion") {
    const fs::path out = fresh_dir("latdev_t_laplace");
    Json config = parse_json_file(cfg("laplace_ou.json"));
    config["model"] = parse_json_file(cfg("ou_additive.json"));
    config["laplace"]["eps_list"] = {0.1, 0.05};
    config["laplace"]["ensemble_list"] = {2000, 4000};
    const fs::path small = out / "small.json";
    write_json_file(small.string(), config);
    const RunResult r =
        run_cli("laplace --config " + small.string() + " --out " + out.string() + " --threads 2");
    CHECK(r.exit_code == 0);
    const Json j = parse_json_file((out / "laplace.json").string());
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double limit = std::exp(-2.0) / (1.0 + 2.0 * s_sq);
    CHECK(j.at("inf_h_plus_rate").get<double>() == doctest::Approx(limit).epsilon(0.02));
    CHECK(j.at("converged").get<bool>());
    const std::string csv = slurp(out / "laplace.csv");
    CHECK(csv.find("eps,value,ci_half,ensemble") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
