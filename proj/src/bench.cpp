#include "latdev/bench.hpp"

#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "latdev/benchmarks.hpp"
#include "latdev/csv.hpp"
#include "latdev/ldp.hpp"
#include "latdev/rate.hpp"
#include "latdev/rng.hpp"
#include "latdev/sde.hpp"
#include "latdev/skeleton.hpp"

namespace latdev::bench {

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
    void note(const std::string& s) {
        if (detail.tellp() > 0) detail << "; ";
        detail << s;
    }
};

State random_state(const LatticeWindow& w, const CounterRng& rng, uint64_t sample, double scale) {
    State s = State::zero(w);
    for (long i = 0; i < w.site_count(); ++i)
        s.values[i] = scale * (2.0 * rng.uniform(sample, static_cast<uint32_t>(i), 0,
                                                 RngPurpose::test_vectors) -
                               1.0);
    return s;
}

std::string fmt(double x) { return CsvTable::format(x); }

// ---------------------------------------------------------------- criterion 1
CriterionResult operator_identities(const BenchOptions& opt) {
    Check c;
    const CounterRng rng(opt.seed);
    const double tol = 1e-12;
    uint64_t sample = 0;
    double worst_factor = 0.0, worst_sym = 0.0;
    for (int N = 1; N <= 2; ++N) {
        for (int m = 0; m <= 4; ++m) {
            const LatticeWindow w(N, m);
            for (int rep = 0; rep < 20; ++rep, ++sample) {
                const State u = random_state(w, rng, sample, 1.0);
                const State v = random_state(w, rng, sample + 100000, 1.0);
                const State au = apply_A(u);

                State bb = State::zero(w);
                for (int j = 1; j <= N; ++j) {
                    const State t = apply_B_star(j, apply_B(j, u));
                    bb.values += t.values;
                }
                const double factor_err = (au.values - bb.values).norm();
                worst_factor = std::max(worst_factor, factor_err / std::max(u.norm(), 1e-300));
                c.expect(factor_err <= tol * u.norm(), "A != sum B*B at N=" + std::to_string(N) +
                                                           " m=" + std::to_string(m));

                const double energy = dirichlet_energy(u);
                const double quad = au.values.dot(u.values);
                c.expect(std::abs(energy - quad) <= tol * std::max(1.0, u.squared_norm()),
                         "(Au,u) != ||Bu||^2");
                c.expect(quad >= -tol, "(Au,u) negative");
                c.expect(au.norm() <= 4.0 * N * u.norm() * (1.0 + tol), "||Au|| > 4N||u||");

                const State av = apply_A(v);
                const double sym =
                    std::abs(au.values.dot(v.values) - u.values.dot(av.values));
                worst_sym = std::max(worst_sym, sym / std::max(u.norm() * v.norm(), 1e-300));
                c.expect(sym <= tol * u.norm() * v.norm(), "A not symmetric");
            }
        }
    }
    c.note("max rel factorization err " + fmt(worst_factor) + ", symmetry err " + fmt(worst_sym));
    return {1, "operator identities", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 2
CriterionResult structural_conditions(const BenchOptions& opt) {
    Check c;
    const ModelSpec spec = tanh_lattice();
    const double R = 5.0;
    const ValidationReport rep = validate(spec, R);
    c.expect(rep.valid, "benchmark model failed validation");

    const CounterRng rng(opt.seed + 1);
    const double a2d2 = rep.alpha * rep.alpha * rep.delta_norm_sq;
    const double lips = rep.sigma_lipschitz * rep.sigma_lipschitz * rep.delta_norm_sq;
    double worst_mono = 0.0;
    for (int i = 0; i < 10000; ++i) {
        State u = random_state(spec.window, rng, 2 * i, 5.0);
        State v = random_state(spec.window, rng, 2 * i + 1, 5.0);
        // Scale into the radius-R ball so the local Lipschitz constants apply.
        if (u.norm() > R) u.values *= R / u.norm();
        if (v.norm() > R) v.values *= R / v.norm();

        const State fu = f_eval(spec, u), fv = f_eval(spec, v);
        const double mono = (fu.values - fv.values).dot(u.values - v.values);
        worst_mono = std::min(worst_mono, mono);
        c.expect(mono >= -1e-12, "monotonicity violated: " + fmt(mono));

        double growth = 0.0, lip_lhs = 0.0;
        for (int k = 1; k <= spec.mode_count(); ++k) {
            growth += sigma_k_eval(spec, k, u).squared_norm();
            lip_lhs +=
                (sigma_k_eval(spec, k, u).values - sigma_k_eval(spec, k, v).values).squaredNorm();
        }
        c.expect(growth <= 2.0 * a2d2 * (1.0 + u.squared_norm()) * (1.0 + 1e-12),
                 "growth bound violated");
        c.expect(lip_lhs <= lips * (u.values - v.values).squaredNorm() * (1.0 + 1e-12) + 1e-30,
                 "sigma Lipschitz bound violated");
        c.expect((fu.values - fv.values).norm() <=
                     rep.f_lipschitz * (u.values - v.values).norm() * (1.0 + 1e-12) + 1e-30,
                 "drift Lipschitz bound violated");
    }
    c.note("min monotonicity inner product " + fmt(worst_mono) + ", L_R = " +
           fmt(rep.f_lipschitz));
    return {2, "structural conditions", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 3
CriterionResult skeleton_correctness(const BenchOptions& opt, bool corrupt_tolerance) {
    Check c;
    const double decay_tol = corrupt_tolerance ? 1e-15 : 1e-6;
    {
        const ModelSpec spec = ou_additive();
        const TimeGrid grid(1.0, 100);
        const State u0 = State::unit(spec.window, {0});
        const Trajectory path = solve_unforced(spec, grid, u0);
        const double err = std::abs(path.states(grid.steps, 0) - std::exp(-1.0));
        c.expect(err <= decay_tol, "exponential decay error " + fmt(err));
        c.note("decay error " + fmt(err));
    }

    // Gronwall domination on random validated configs.
    const CounterRng rng(opt.seed + 2);
    int tested = 0;
    for (uint64_t trial = 0; tested < 100; ++trial) {
        auto u01 = [&](uint32_t slot) {
            return rng.uniform(trial, 0xFFFF0000u, slot, RngPurpose::test_vectors);
        };
        ModelSpec spec;
        spec.window = LatticeWindow(1 + static_cast<int>(u01(0) * 2) % 2,
                                    static_cast<int>(u01(1) * 3) % 3);
        const std::vector<int> origin(static_cast<size_t>(spec.window.dim()), 0);
        spec.horizon = 0.5;
        spec.drift.nu = 0.1 + 0.9 * u01(2);
        const int fkind = static_cast<int>(u01(3) * 3) % 3;
        if (fkind == 0) {
            spec.drift.f0 = Polynomial{};
            spec.drift.gamma = -u01(4);
        } else if (fkind == 1) {
            spec.drift.f0 = Polynomial({0, 0, 0, 1.0});  // s^3, min F0' = 0
            spec.drift.gamma = -u01(4);
        } else {
            spec.drift.f0 = Polynomial({0, -1.0, 0, 1.0});  // s^3 - s, min F0' = -1
            spec.drift.gamma = -1.0 - u01(4);
        }
        if (u01(5) > 0.4)
            spec.drift.g.terms.push_back({origin, Waveform::constant(u01(6) - 0.5), -1});
        const int n_modes = static_cast<int>(u01(7) * 3) % 3;
        for (int k = 0; k < n_modes; ++k) {
            ModeSpec mode;
            const double kindpick = u01(8 + 10 * static_cast<uint32_t>(k));
            mode.sigma0.kind = kindpick < 0.34  ? Sigma0::Kind::zero
                               : kindpick < 0.67 ? Sigma0::Kind::linear
                                                 : Sigma0::Kind::tanh;
            mode.sigma0.scale = 0.5 * u01(9 + 10 * static_cast<uint32_t>(k));
            mode.delta.push_back({origin, u01(10 + 10 * static_cast<uint32_t>(k)) - 0.5, -1});
            mode.h.terms.push_back(
                {origin, Waveform::constant(u01(11 + 10 * static_cast<uint32_t>(k)) - 0.5), -1});
            spec.noise.modes.push_back(std::move(mode));
        }
        spec.bind();
        if (!validate(spec).valid) continue;
        ++tested;

        State u0 = random_state(spec.window, rng, trial + 7777, 1.0);
        if (u0.norm() > 1.0) u0.values /= u0.norm();

        const int K = spec.mode_count();
        TimeGrid grid(spec.horizon, 50);
        Control v(grid, K);
        for (int m = 0; m < grid.steps; ++m)
            for (int k = 0; k < K; ++k)
                v.values(m, k) =
                    rng.uniform(trial, static_cast<uint32_t>(m), static_cast<uint32_t>(40 + k),
                                RngPurpose::test_vectors) -
                    0.5;
        if (v.l2_sq() > 1.0) v.values /= std::sqrt(v.l2_sq());

        const double bound = apriori_bound(spec, u0, v);
        // Refine the grid until the explicit-scheme guard holds on the certified ball.
        const double dt_max = stability_dt_bound(spec, std::sqrt(bound) + 1.0);
        const int M = std::max(50, static_cast<int>(std::ceil(spec.horizon / dt_max)));
        if (M != grid.steps) {
            TimeGrid fine(spec.horizon, M);
            Control vf(fine, K);
            for (int m = 0; m < fine.steps; ++m)
                vf.values.row(m) = v.values.row(std::min(grid.steps - 1, m * grid.steps / M));
            grid = fine;
            v = vf;
            if (v.l2_sq() > 1.0) v.values /= std::sqrt(v.l2_sq());
        }
        const Trajectory path = solve(spec, grid, u0, v);
        const double sup_sq = path.sup_norm_sq();
        c.expect(sup_sq <= apriori_bound(spec, u0, v) * (1.0 + 1e-6),
                 "Gronwall bound violated on random config " + std::to_string(tested));
    }
    c.note("100 random configs dominated");
    return {3, "skeleton correctness", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 4
CriterionResult weak_convergence(const BenchOptions&) {
    Check c;
    const std::vector<int> n_list = {1, 2, 4, 8, 16};
    const int M = 512;
    struct Case {
        const char* name;
        ModelSpec spec;
        Vector w;
    };
    std::vector<Case> cases;
    {
        const ModelSpec a = ou_additive();
        Vector w(1);
        w << 1.0;
        cases.push_back({"additive", a, w});
        const ModelSpec t = tanh_lattice();
        Vector w2(2);
        w2 << 1.0, 1.0;
        cases.push_back({"tanh", t, w2});
    }
    for (const Case& cs : cases) {
        const TimeGrid grid(cs.spec.horizon, M);
        const State u0 = State::zero(cs.spec.window);
        const Control v(grid, cs.spec.mode_count());
        const auto rows = weak_convergence_probe(cs.spec, grid, u0, v, cs.w, n_list);
        for (size_t i = 0; i + 1 < rows.size(); ++i)
            c.expect(rows[i + 1].distance <= rows[i].distance,
                     std::string(cs.name) + ": d_n increased at n=" +
                         std::to_string(rows[i + 1].n));
        const double floor = std::max(rows.front().distance / 4.0, 10.0 / M);
        c.expect(rows.back().distance <= floor,
                 std::string(cs.name) + ": d_16 = " + fmt(rows.back().distance) +
                     " above floor " + fmt(floor));
        c.note(std::string(cs.name) + " d_1 = " + fmt(rows.front().distance) + ", d_16 = " +
               fmt(rows.back().distance));
    }
    return {4, "weak convergence probe", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 5
CriterionResult gradient_exactness(const BenchOptions& opt) {
    Check c;
    const int M = 256;
    const double lambda = 500.0;
    const CounterRng rng(opt.seed + 3);
    int case_id = 0;
    for (const ModelSpec& spec : {ou_additive(), tanh_lattice()}) {
        ++case_id;
        const TimeGrid grid(spec.horizon, M);
        const int K = spec.mode_count();
        const State u0 = State::zero(spec.window);

        Control v0(grid, K), v(grid, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k) {
                const double t = grid.node(m) + 0.5 * grid.dt();
                v0.values(m, k) = 0.4 * std::sin(2.0 * std::numbers::pi * t + k);
                v.values(m, k) =
                    0.8 * (rng.uniform(case_id, static_cast<uint32_t>(m),
                                       static_cast<uint32_t>(k), RngPurpose::test_vectors) -
                           0.5);
            }
        // Feasible smooth target: the Euler path of v0.
        SdeConfig det;
        det.eps = 0.0;
        det.grid = grid;
        const Trajectory phi = simulate(spec, det, u0, v0);

        Eigen::MatrixXd grad;
        adjoint_gradient(spec, u0, phi, v, lambda, grad);

        double worst = 0.0;
        for (int probe = 0; probe < 20; ++probe) {
            const int m = static_cast<int>(rng.uniform(1000 + probe, 0, 0,
                                                       RngPurpose::test_vectors) *
                                           M) %
                          M;
            const int k = static_cast<int>(rng.uniform(1000 + probe, 1, 0,
                                                       RngPurpose::test_vectors) *
                                           K) %
                          K;
            const double h = 1e-6 * std::max(1.0, std::abs(v.values(m, k)));
            Control vp = v, vm_ = v;
            vp.values(m, k) += h;
            vm_.values(m, k) -= h;
            Eigen::MatrixXd dump;
            const double jp = adjoint_gradient(spec, u0, phi, vp, lambda, dump);
            const double jm = adjoint_gradient(spec, u0, phi, vm_, lambda, dump);
            const double fd = (jp - jm) / (2.0 * h);
            const double rel = std::abs(fd - grad(m, k)) / std::max(std::abs(grad(m, k)), 1e-10);
            worst = std::max(worst, rel);
            c.expect(rel < 1e-5, "FD mismatch at (m=" + std::to_string(m) + ",k=" +
                                     std::to_string(k) + "): rel " + fmt(rel));
        }
        c.note(std::string(case_id == 1 ? "additive" : "tanh") + " worst rel err " + fmt(worst));
    }
    return {5, "adjoint gradient exactness", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 6
CriterionResult rate_oracle_agreement(const BenchOptions& opt) {
    Check c;
    const ModelSpec spec = ou_additive();
    const TimeGrid grid(1.0, 100);
    const State u0 = State::zero(spec.window);

    RateOptions ropt;
    ropt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9};

    {  // phi(t) = t, cost -> 7/6.
        Trajectory ramp(grid, spec.window);
        for (int m = 0; m <= grid.steps; ++m) ramp.states(m, 0) = grid.node(m);
        const RateEstimate oracle = additive_oracle(spec, u0, ramp);
        c.expect(oracle.feasible, "ramp infeasible for the oracle");
        c.expect(std::abs(oracle.cost - 7.0 / 6.0) <= 0.01 * (7.0 / 6.0),
                 "oracle cost " + fmt(oracle.cost) + " not within 1% of 7/6");
        const RateEstimate est = rate_estimate(spec, u0, ramp, ropt);
        c.expect(std::abs(est.cost - oracle.cost) / oracle.cost < 0.02,
                 "estimator/oracle gap " + fmt(std::abs(est.cost - oracle.cost) / oracle.cost));
        c.expect(est.residual < 1e-6, "ramp residual " + fmt(est.residual));
        c.note("ramp oracle " + fmt(oracle.cost) + ", estimate " + fmt(est.cost));
    }

    const CounterRng rng(opt.seed + 4);
    for (int trial = 0; trial < 10; ++trial) {
        Control vr(grid, spec.mode_count());
        const double a1 = 2.0 * rng.uniform(trial, 0, 1, RngPurpose::test_vectors) - 1.0;
        const double a2 = 2.0 * rng.uniform(trial, 0, 2, RngPurpose::test_vectors) - 1.0;
        const double a3 = rng.uniform(trial, 0, 3, RngPurpose::test_vectors);
        for (int m = 0; m < grid.steps; ++m) {
            const double t = grid.node(m);
            vr.values(m, 0) = a1 + a2 * std::sin(2.0 * std::numbers::pi * (t + a3));
        }
        SdeConfig det;
        det.eps = 0.0;
        det.grid = grid;
        const Trajectory phi = simulate(spec, det, u0, vr);
        const RateEstimate oracle = additive_oracle(spec, u0, phi);
        c.expect(oracle.feasible, "random target infeasible");
        const RateEstimate est = rate_estimate(spec, u0, phi, ropt);
        const double gap = std::abs(est.cost - oracle.cost) / std::max(oracle.cost, 1e-9);
        c.expect(gap < 0.02, "trial " + std::to_string(trial) + " gap " + fmt(gap));
        c.expect(est.residual < 1e-6,
                 "trial " + std::to_string(trial) + " residual " + fmt(est.residual));
    }
    return {6, "rate oracle agreement", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 7
CriterionResult endpoint_rate_value(const BenchOptions&, bool corrupt_tolerance) {
    Check c;
    const ModelSpec spec = ou_additive();
    const TimeGrid grid(1.0, 400);
    const State u0 = State::zero(spec.window);
    const State dir = State::unit(spec.window, {0});

    RateOptions ropt;
    ropt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
    ropt.residual_tol = 1e-5;

    const RateEstimate est = endpoint_rate(spec, grid, u0, dir, 1.0, ropt);
    const double exact = 1.0 / (1.0 - std::exp(-2.0));
    const double tol = corrupt_tolerance ? 1e-9 : 0.01;
    const double rel = std::abs(est.cost - exact) / exact;
    c.expect(rel <= tol, "endpoint rate " + fmt(est.cost) + " vs exact " + fmt(exact) +
                             " (rel " + fmt(rel) + ")");
    c.expect(est.residual <= 1e-4, "terminal constraint gap " + fmt(est.residual));
    c.note("I = " + fmt(est.cost) + " vs " + fmt(exact) + " rel " + fmt(rel));
    return {7, "endpoint rate", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 8
CriterionResult ldp_curve_check(const BenchOptions& opt) {
    Check c;
    const ModelSpec spec = ou_additive();
    const State u0 = State::zero(spec.window);
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double rate_exact = 1.0 / (2.0 * s_sq);

    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 200);
    cfg.seed = opt.seed + 5;
    cfg.threads = opt.threads;
    const EventSpec event = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);

    const auto rows = ldp_curve(spec, cfg, u0, event, {0.5, 0.2}, {1000000, 1000000});
    for (const LdpCurveRow& row : rows) {
        const double p_exact = gaussian_tail(1.0 / std::sqrt(row.eps * s_sq));
        const double se = std::sqrt(p_exact * (1.0 - p_exact) / row.ensemble);
        c.expect(std::abs(row.p_hat - p_exact) <= 3.0 * se,
                 "eps " + fmt(row.eps) + ": p_hat " + fmt(row.p_hat) + " vs exact " +
                     fmt(p_exact) + " beyond 3 SE");
        c.note("eps " + fmt(row.eps) + ": -eps log p = " + fmt(row.minus_eps_log_p));
    }

    // Analytic curve: monotone decrease toward the rate, 5% at eps = 0.01.
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) {
        const double val = -eps * log_gaussian_tail(1.0 / std::sqrt(eps * s_sq));
        c.expect(val < prev, "analytic curve not decreasing at eps " + fmt(eps));
        c.expect(val > rate_exact, "analytic curve fell below the rate");
        prev = val;
    }
    c.expect(std::abs(prev - rate_exact) / rate_exact <= 0.05,
             "analytic value at eps 0.01 is " + fmt(prev) + ", rate " + fmt(rate_exact));
    c.note("curve limit " + fmt(prev) + " vs I = " + fmt(rate_exact));
    return {8, "LDP curve", c.pass, c.detail.str(), 0.0};
}

// ---------------------------------------------------------------- criterion 9
CriterionResult laplace_check(const BenchOptions& opt) {
    Check c;
    const ModelSpec spec = ou_additive();
    const State u0 = State::unit(spec.window, {0});
    const TimeGrid grid(1.0, 400);

    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double mean = std::exp(-1.0);
    const double limit = mean * mean / (1.0 + 2.0 * s_sq);

    auto terminal_sq = [](const Trajectory& path) {
        return path.states.row(path.grid.steps).squaredNorm();
    };

    const std::vector<double> eps_list = {0.2, 0.05, 0.02};
    const std::vector<long> ensembles = {100000, 300000, 1000000};
    LaplaceResult last;
    for (size_t i = 0; i < eps_list.size(); ++i) {
        SdeConfig cfg;
        cfg.grid = grid;
        cfg.eps = eps_list[i];
        cfg.ensemble_size = ensembles[i];
        cfg.seed = opt.seed + 6;
        cfg.threads = opt.threads;
        last = laplace_functional(spec, cfg, u0, terminal_sq);
        const double exact =
            0.5 * cfg.eps * std::log(1.0 + 2.0 * s_sq) + limit;
        c.note("eps " + fmt(cfg.eps) + ": MC " + fmt(last.value) + " exact " + fmt(exact));
    }
    const double three_se = 3.0 * last.ci_half / 1.959963984540054;
    c.expect(std::abs(last.value - limit) <= 0.10 * limit + three_se,
             "MC Laplace value " + fmt(last.value) + " vs limit " + fmt(limit));

    TerminalObjective H;
    H.value = [](const State& uT) { return uT.values.squaredNorm(); };
    H.gradient = [](const State& uT) -> Vector { return 2.0 * uT.values; };
    RateOptions ropt;
    const LaplaceInfResult inf = laplace_inf(spec, grid, u0, H, ropt);
    c.expect(std::abs(inf.value - limit) <= 0.01 * limit,
             "inf{H+I} " + fmt(inf.value) + " vs limit " + fmt(limit));
    c.note("inf{H+I} = " + fmt(inf.value) + ", limit " + fmt(limit));
    return {9, "Laplace principle", c.pass, c.detail.str(), 0.0};
}

// --------------------------------------------------------------- criterion 10
CriterionResult h1_probe_check(const BenchOptions& opt) {
    Check c;
    const std::vector<double> eps_list = {1e-1, 1e-2, 1e-3};
    {
        const ModelSpec spec = ou_additive();
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 400);
        cfg.seed = opt.seed + 7;
        cfg.threads = opt.threads;
        Control v(cfg.grid, 1);
        v.values.setOnes();
        const auto rows = h1_probe(spec, cfg, State::zero(spec.window), v, eps_list, 4000);
        for (size_t i = 0; i + 1 < rows.size(); ++i) {
            c.expect(rows[i + 1].distance.mean < rows[i].distance.mean,
                     "additive distances not decreasing");
            const double ratio = rows[i].distance.mean / rows[i + 1].distance.mean;
            c.expect(std::abs(ratio / std::sqrt(10.0) - 1.0) <= 0.3,
                     "additive ratio " + fmt(ratio) + " off sqrt(10)");
            c.note("additive ratio " + fmt(ratio));
        }
    }
    {
        const ModelSpec spec = tanh_lattice();
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 400);
        cfg.seed = opt.seed + 8;
        cfg.threads = opt.threads;
        Control v(cfg.grid, 2);
        v.values.setConstant(0.5);
        const auto rows = h1_probe(spec, cfg, State::zero(spec.window), v, eps_list, 2000);
        for (size_t i = 0; i + 1 < rows.size(); ++i)
            c.expect(rows[i + 1].distance.mean < rows[i].distance.mean,
                     "tanh distances not decreasing");
        c.note("tanh distances " + fmt(rows[0].distance.mean) + " -> " +
               fmt(rows[2].distance.mean));
    }
    return {10, "H1 probe", c.pass, c.detail.str(), 0.0};
}

// --------------------------------------------------------------- criterion 11
CriterionResult uniform_moments(const BenchOptions& opt) {
    Check c;
    int case_id = 0;
    for (const ModelSpec& spec : {ou_additive(), tanh_lattice()}) {
        ++case_id;
        const State u0 = State::unit(spec.window, {0});
        const double bound = gronwall_moment_bound(spec, u0.squared_norm(), 0.0);
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            SdeConfig cfg;
            cfg.grid = TimeGrid(1.0, 200);
            cfg.eps = eps;
            cfg.seed = opt.seed + 9;
            cfg.ensemble_size = 2000;
            cfg.threads = opt.threads;
            const MeanCI mom = moment_sup_sq(spec, cfg, u0);
            c.expect(mom.ci_high <= bound, "moment " + fmt(mom.mean) + " above bound " +
                                               fmt(bound) + " at eps " + fmt(eps));
            if (case_id == 1 && eps == 1e-3)
                c.note("additive moment at eps 1e-3: " + fmt(mom.mean) + " <= " + fmt(bound));
        }
    }
    return {11, "uniform moments", c.pass, c.detail.str(), 0.0};
}

// --------------------------------------------------------------- criterion 12
CriterionResult determinism(const BenchOptions& opt) {
    Check c;
    const ModelSpec spec = ou_additive();
    const State u0 = State::zero(spec.window);

    auto ensemble_csv = [&](int threads) {
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 200);
        cfg.eps = 0.5;
        cfg.seed = opt.seed + 10;
        cfg.ensemble_size = 10000;
        cfg.threads = threads;
        const auto sup = ensemble_map(spec, cfg, u0, std::nullopt,
                                      [](const Trajectory& t) { return t.sup_norm_sq(); });
        CsvTable csv({"sample", "sup_norm_sq"});
        for (size_t i = 0; i < sup.size(); ++i)
            csv.cell(static_cast<long>(i)).cell(sup[i]);
        return csv.to_string();
    };
    auto tail_csv = [&](int threads) {
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 200);
        cfg.eps = 0.5;
        cfg.seed = opt.seed + 11;
        cfg.ensemble_size = 100000;
        cfg.threads = threads;
        const EventSpec event =
            EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);
        const TailResult tr = tail_probability(spec, cfg, u0, event);
        CsvTable csv({"p_hat", "ci_low", "ci_high"});
        csv.cell(tr.p_hat).cell(tr.ci_low).cell(tr.ci_high);
        return csv.to_string();
    };
    auto h1_csv = [&](int threads) {
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 200);
        cfg.seed = opt.seed + 12;
        cfg.threads = threads;
        Control v(cfg.grid, 1);
        v.values.setOnes();
        const auto rows = h1_probe(spec, cfg, u0, v, {1e-1, 1e-2}, 500);
        CsvTable csv({"eps", "mean", "se"});
        for (const auto& r : rows) csv.cell(r.eps).cell(r.distance.mean).cell(r.distance.std_error);
        return csv.to_string();
    };
    auto laplace_csv = [&](int threads) {
        SdeConfig cfg;
        cfg.grid = TimeGrid(1.0, 200);
        cfg.eps = 0.2;
        cfg.seed = opt.seed + 13;
        cfg.ensemble_size = 100000;
        cfg.threads = threads;
        const LaplaceResult r = laplace_functional(spec, cfg, u0, [](const Trajectory& p) {
            return p.states.row(p.grid.steps).squaredNorm();
        });
        CsvTable csv({"eps", "value", "ci_half"});
        csv.cell(r.eps).cell(r.value).cell(r.ci_half);
        return csv.to_string();
    };

    int checked = 0;
    const std::vector<std::function<std::string(int)>> kernels = {ensemble_csv, tail_csv, h1_csv,
                                                                  laplace_csv};
    for (const auto& kernel : kernels) {
        const std::string one = kernel(1);
        const std::string two = kernel(2);
        const std::string again = kernel(2);
        ++checked;
        c.expect(one == two, "kernel " + std::to_string(checked) + " differs across threads");
        c.expect(two == again, "kernel " + std::to_string(checked) + " differs across runs");
    }
    c.note("4 stochastic kernels byte-identical across {1,2} threads and reruns");
    return {12, "determinism", c.pass, c.detail.str(), 0.0};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const BenchOptions& options) {
    std::vector<CriterionResult> results;
    auto run = [&](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r = fn();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (options.verbose) {
            std::printf("[%s] criterion %2d (%s): %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.detail.c_str(), r.seconds);
            std::fflush(stdout);
        }
        results.push_back(std::move(r));
    };

    if (options.self_test) {
        run([&] { return operator_identities(options); });
        run([&] { return structural_conditions(options); });
        run([&] { return skeleton_correctness(options, true); });
        return results;
    }

    run([&] { return operator_identities(options); });
    run([&] { return structural_conditions(options); });
    run([&] { return skeleton_correctness(options, false); });
    run([&] { return weak_convergence(options); });
    run([&] { return gradient_exactness(options); });
    run([&] { return rate_oracle_agreement(options); });
    run([&] { return endpoint_rate_value(options, false); });
    run([&] { return ldp_curve_check(options); });
    run([&] { return laplace_check(options); });
    run([&] { return h1_probe_check(options); });
    run([&] { return uniform_moments(options); });
    run([&] { return determinism(options); });
    return results;
}

std::string summary_csv(const std::vector<CriterionResult>& results) {
    CsvTable csv({"criterion", "name", "pass", "detail"});
    for (const CriterionResult& r : results)
        csv.cell(r.id).cell(r.name).cell(std::string(r.pass ? "1" : "0")).cell(r.detail);
    return csv.to_string();
}

}  // namespace latdev::bench
