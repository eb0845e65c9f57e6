#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latdev/benchmarks.hpp"
#include "latdev/rate.hpp"
#include "latdev/rng.hpp"
#include "latdev/sde.hpp"
#include "latdev/skeleton.hpp"

using namespace latdev;

namespace {

Trajectory euler_path(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                      const Control& v) {
    SdeConfig det;
    det.eps = 0.0;
    det.grid = grid;
    return simulate(spec, det, u0, v);
}

Trajectory ramp_target(const ModelSpec& spec, const TimeGrid& grid) {
    Trajectory phi(grid, spec.window);
    for (int m = 0; m <= grid.steps; ++m) phi.states(m, 0) = grid.node(m);
    return phi;
}

}  // namespace

TEST_CASE("gradient vanishes at the unforced minimum") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 50);
    const State u0 = State::unit(spec.window, {0});
    const Control v(grid, 1);
    const Trajectory phi = euler_path(spec, grid, u0, v);

    Eigen::MatrixXd grad;
    const double j = adjoint_gradient(spec, u0, phi, v, 1e4, grad);
    CHECK(j == doctest::Approx(0.0));
    CHECK(grad.norm() == doctest::Approx(0.0));
}

TEST_CASE("adjoint gradient matches central differences") {
    const CounterRng rng(123);
    for (const ModelSpec& spec : {bench::ou_additive(), bench::tanh_lattice()}) {
        const TimeGrid grid(1.0, 256);
        const int K = spec.mode_count();
        const State u0 = State::zero(spec.window);

        Control v0(grid, K), v(grid, K);
        for (int m = 0; m < grid.steps; ++m)
            for (int k = 0; k < K; ++k) {
                v0.values(m, k) = 0.3 * std::sin(2.0 * std::numbers::pi * grid.node(m) + k);
                v.values(m, k) = 0.8 * (rng.uniform(static_cast<uint64_t>(m), 0,
                                                    static_cast<uint32_t>(k),
                                                    RngPurpose::test_vectors) -
                                        0.5);
            }
        const Trajectory phi = euler_path(spec, grid, u0, v0);

        Eigen::MatrixXd grad;
        adjoint_gradient(spec, u0, phi, v, 300.0, grad);
        for (int probe = 0; probe < 20; ++probe) {
            const int m = (probe * 37) % grid.steps;
            const int k = probe % K;
            const double h = 1e-6;
            Control vp = v, vm = v;
            vp.values(m, k) += h;
            vm.values(m, k) -= h;
            Eigen::MatrixXd dump;
            const double fd = (adjoint_gradient(spec, u0, phi, vp, 300.0, dump) -
                               adjoint_gradient(spec, u0, phi, vm, 300.0, dump)) /
                              (2.0 * h);
            CHECK(std::abs(fd - grad(m, k)) <= 1e-5 * std::max(std::abs(grad(m, k)), 1e-8));
        }
    }
}

TEST_CASE("adjoint gradient against the hand-derived linear formula") {
    // Single site, drift -u, sigma(t,u)v = v: u_{j+1} = (1-dt) u_j + dt v_j.
    // dJ/dv_m = dt v_m + 2 lambda dt^2 sum_{j>m} (1-dt)^{j-1-m} (u_j - phi_j).
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 16);
    const double dt = grid.dt();
    const double lambda = 7.0;
    const State u0 = State::zero(spec.window);

    Control v(grid, 1);
    for (int m = 0; m < grid.steps; ++m) v.values(m, 0) = 0.1 * m;
    Trajectory phi(grid, spec.window);
    for (int m = 0; m <= grid.steps; ++m) phi.states(m, 0) = 0.05 * m;

    Trajectory path;
    Eigen::MatrixXd grad;
    adjoint_gradient(spec, u0, phi, v, lambda, grad, &path);

    for (int m = 0; m < grid.steps; ++m) {
        double acc = 0.0;
        for (int j = m + 1; j <= grid.steps; ++j)
            acc += std::pow(1.0 - dt, j - 1 - m) * (path.states(j, 0) - phi.states(j, 0));
        const double expected = dt * v.values(m, 0) + 2.0 * lambda * dt * dt * acc;
        CHECK(grad(m, 0) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("rate of the unforced path is zero") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 100);
    const State u0 = State::unit(spec.window, {0});
    const Trajectory phi = euler_path(spec, grid, u0, Control(grid, 1));

    const RateEstimate est = rate_estimate(spec, u0, phi);
    CHECK(est.cost <= 1e-6);
    CHECK(est.residual <= 1e-6);
    CHECK(est.converged);

    const RateEstimate oracle = additive_oracle(spec, u0, phi);
    CHECK(oracle.feasible);
    CHECK(oracle.cost <= 1e-12);
}

TEST_CASE("ramp benchmark: cost 7/6 and oracle agreement") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 100);
    const State u0 = State::zero(spec.window);
    const Trajectory phi = ramp_target(spec, grid);

    const RateEstimate oracle = additive_oracle(spec, u0, phi);
    CHECK(oracle.feasible);
    CHECK(oracle.cost == doctest::Approx(7.0 / 6.0).epsilon(0.01));
    CHECK(oracle.residual < 1e-10);
    // v*(t) = 1 + t at the left nodes
    CHECK(oracle.control.values(0, 0) == doctest::Approx(1.0));
    CHECK(oracle.control.values(50, 0) == doctest::Approx(1.5));

    RateOptions opt;
    opt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
    std::vector<IterationRecord> trace;
    const RateEstimate est = rate_estimate(spec, u0, phi, opt, &trace);
    CHECK(std::abs(est.cost - oracle.cost) / oracle.cost < 0.02);
    CHECK(est.residual < 1e-6);
    CHECK(est.converged);
    CHECK(trace.size() == opt.penalties.size());
    // penalty continuation approaches the constrained optimum from below
    for (size_t s = 0; s + 1 < trace.size(); ++s)
        CHECK(trace[s].cost <= trace[s + 1].cost * (1.0 + 1e-9));
}

TEST_CASE("target not starting at u0 is rejected") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 50);
    Trajectory phi(grid, spec.window);
    phi.states(0, 0) = 0.5;
    CHECK_THROWS_AS(rate_estimate(spec, State::zero(spec.window), phi), TargetMismatch);
    CHECK_THROWS_AS(additive_oracle(spec, State::zero(spec.window), phi), TargetMismatch);
}

TEST_CASE("oracle rejects multiplicative modes") {
    const ModelSpec spec = bench::tanh_lattice();
    const TimeGrid grid(1.0, 50);
    const Trajectory phi(grid, spec.window);
    CHECK_THROWS_AS(additive_oracle(spec, State::zero(spec.window), phi),
                    OraclePreconditionViolated);
}

TEST_CASE("defect outside the mode span is infeasible") {
    const ModelSpec spec = bench::ou_additive();  // h only touches site 0
    ModelSpec wide = spec;
    wide.window = LatticeWindow(1, 1);
    wide.noise.modes[0].h.terms[0].site = {0};
    wide.bind();
    const TimeGrid grid(1.0, 40);
    // target moves site +1, which no h_k can reach
    Trajectory phi(grid, wide.window);
    for (int m = 0; m <= grid.steps; ++m) phi.states(m, 2) = 0.3 * grid.node(m);
    const RateEstimate oracle = additive_oracle(wide, State::zero(wide.window), phi);
    CHECK(!oracle.feasible);
    CHECK(std::isinf(oracle.cost));
}

TEST_CASE("oracle scaling: doubling h quarters the cost") {
    const ModelSpec spec = bench::ou_additive();
    ModelSpec doubled = spec;
    doubled.noise.modes[0].h.terms[0].wave = Waveform::constant(2.0);
    doubled.bind();
    const TimeGrid grid(1.0, 80);
    const State u0 = State::zero(spec.window);
    const Trajectory phi = ramp_target(spec, grid);

    const RateEstimate base = additive_oracle(spec, u0, phi);
    const RateEstimate big = additive_oracle(doubled, u0, phi);
    CHECK(big.cost == doctest::Approx(base.cost / 4.0).epsilon(1e-10));
}

TEST_CASE("upper-bound consistency on random feasible targets") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 64);
    const State u0 = State::zero(spec.window);
    const CounterRng rng(55);
    for (uint64_t trial = 0; trial < 5; ++trial) {
        Control v(grid, 1);
        for (int m = 0; m < grid.steps; ++m)
            v.values(m, 0) =
                rng.uniform(trial, static_cast<uint32_t>(m), 0, RngPurpose::test_vectors) - 0.5;
        const Trajectory phi = euler_path(spec, grid, u0, v);
        RateOptions opt;
        opt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6};
        const RateEstimate est = rate_estimate(spec, u0, phi, opt);
        // v itself is feasible, so the estimate cannot exceed its cost
        CHECK(est.cost <= v.cost() * (1.0 + 1e-6) + 1e-9);
        const RateEstimate oracle = additive_oracle(spec, u0, phi);
        CHECK(est.cost >= oracle.cost * (1.0 - 0.02) - 1e-9);
    }
}

TEST_CASE("endpoint rate on the OU benchmark") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 400);
    const State u0 = State::zero(spec.window);
    const State dir = State::unit(spec.window, {0});

    RateOptions opt;
    opt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7};

    {  // event already contains the unforced endpoint
        const RateEstimate est = endpoint_rate(spec, grid, u0, dir, -0.5, opt);
        CHECK(est.cost <= 1e-9);
        CHECK(est.residual == 0.0);
    }

    const double exact = 1.0 / (1.0 - std::exp(-2.0));
    const RateEstimate est = endpoint_rate(spec, grid, u0, dir, 1.0, opt);
    CHECK(std::abs(est.cost - exact) / exact < 0.01);
    CHECK(est.residual < 1e-4);

    // delta -> 0+: the rate vanishes continuously (delta^2 / (2 s^2))
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const RateEstimate small = endpoint_rate(spec, grid, u0, dir, 0.1, opt);
    CHECK(small.cost == doctest::Approx(0.01 / (2.0 * s_sq)).epsilon(0.02));
}

TEST_CASE("minimize_terminal solves the one-dimensional LQ problem") {
    const ModelSpec spec = bench::ou_additive();
    const TimeGrid grid(1.0, 400);
    const State u0 = State::unit(spec.window, {0});

    TerminalObjective H;
    H.value = [](const State& uT) { return uT.values.squaredNorm(); };
    H.gradient = [](const State& uT) -> Vector { return 2.0 * uT.values; };

    const RateEstimate est = minimize_terminal(spec, grid, u0, H, false);
    CHECK(est.converged);

    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double m = std::exp(-1.0);
    const double expected = m * m / (1.0 + 2.0 * s_sq);  // inf_x x^2 + (x-m)^2/(2 s^2)
    SdeConfig det;
    det.eps = 0.0;
    det.grid = grid;
    const Trajectory path = simulate(spec, det, u0, est.control);
    const double value = path.states(grid.steps, 0) * path.states(grid.steps, 0) + est.cost;
    CHECK(value == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("two-dimensional window: gradient exactness and oracle agreement") {
    // 3x3 lattice, two additive channels touching different sites.
    ModelSpec spec;
    spec.window = LatticeWindow(2, 1);
    spec.horizon = 1.0;
    spec.drift.nu = 0.25;
    spec.drift.gamma = -0.5;
    spec.drift.f0 = Polynomial({0.0, -0.5, 0.0, 1.0});  // s^3 - s/2, min F0' = -0.5
    spec.drift.g.terms.push_back({{0, 0}, Waveform::constant(0.2), -1});
    ModeSpec m1;
    m1.sigma0.kind = Sigma0::Kind::zero;
    m1.h.terms.push_back({{0, 0}, Waveform::constant(1.0), -1});
    m1.h.terms.push_back({{1, 0}, Waveform::constant(0.5), -1});
    ModeSpec m2;
    m2.sigma0.kind = Sigma0::Kind::zero;
    m2.h.terms.push_back({{0, -1}, Waveform::sinusoid(0.8, 2.0, 0.3), -1});
    spec.noise.modes = {m1, m2};
    spec.bind();
    REQUIRE(validate(spec).valid);

    const TimeGrid grid(1.0, 256);
    const State u0 = State::unit(spec.window, {1, 1});

    Control v0(grid, 2), v(grid, 2);
    for (int m = 0; m < grid.steps; ++m) {
        const double t = grid.node(m);
        v0.values(m, 0) = 0.5 * std::cos(2.0 * t);
        v0.values(m, 1) = 0.3 * t;
        v.values(m, 0) = 0.2 * std::sin(5.0 * t);
        v.values(m, 1) = -0.4 + 0.1 * t;
    }
    const Trajectory phi = euler_path(spec, grid, u0, v0);

    Eigen::MatrixXd grad;
    adjoint_gradient(spec, u0, phi, v, 200.0, grad);
    for (int probe = 0; probe < 12; ++probe) {
        const int m = (probe * 11) % grid.steps;
        const int k = probe % 2;
        const double h = 1e-6;
        Control vp = v, vm_ = v;
        vp.values(m, k) += h;
        vm_.values(m, k) -= h;
        Eigen::MatrixXd dump;
        const double fd = (adjoint_gradient(spec, u0, phi, vp, 200.0, dump) -
                           adjoint_gradient(spec, u0, phi, vm_, 200.0, dump)) /
                          (2.0 * h);
        CHECK(std::abs(fd - grad(m, k)) <= 1e-5 * std::max(std::abs(grad(m, k)), 1e-8));
    }

    // oracle reconstructs a feasible control; the estimator agrees
    const RateEstimate oracle = additive_oracle(spec, u0, phi);
    CHECK(oracle.feasible);
    CHECK(oracle.residual < 1e-10);
    CHECK(oracle.cost <= v0.cost() * (1.0 + 1e-9));
    RateOptions opt;
    opt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
    const RateEstimate est = rate_estimate(spec, u0, phi, opt);
    CHECK(std::abs(est.cost - oracle.cost) / std::max(oracle.cost, 1e-9) < 0.02);
    CHECK(est.residual < 1e-4);
}

TEST_CASE("time-varying noise channels in the oracle") {
    // One sinusoid channel and one step-table channel on a single site: the
    // pointwise least squares sees a different H(t_m) at every node.
    ModelSpec spec;
    spec.window = LatticeWindow(1, 0);
    spec.horizon = 1.0;
    spec.drift.nu = 0.5;
    ModeSpec m1;
    m1.sigma0.kind = Sigma0::Kind::zero;
    m1.h.terms.push_back({{0}, Waveform::sinusoid(1.0, 3.0, 0.2), -1});
    ModeSpec m2;
    m2.sigma0.kind = Sigma0::Kind::zero;
    m2.h.terms.push_back({{0}, Waveform::table({0.0, 0.5}, {0.5, 2.0}), -1});
    spec.noise.modes = {m1, m2};
    spec.bind();

    const TimeGrid grid(1.0, 80);
    const State u0 = State::zero(spec.window);
    Control vgen(grid, 2);
    for (int m = 0; m < grid.steps; ++m) {
        vgen.values(m, 0) = 0.7;
        vgen.values(m, 1) = -0.2 + 0.5 * grid.node(m);
    }
    const Trajectory phi = euler_path(spec, grid, u0, vgen);
    const RateEstimate oracle = additive_oracle(spec, u0, phi);
    CHECK(oracle.feasible);
    CHECK(oracle.residual < 1e-10);
    // minimal-norm solution cannot cost more than the generator
    CHECK(oracle.cost <= vgen.cost() * (1.0 + 1e-12));
    // single site, two channels: the defect is scalar, so the per-node
    // minimal-norm control is parallel to the H(t_m) row
    for (int m = 0; m < grid.steps; ++m) {
        const double t = grid.node(m);
        const double h1 = std::cos(3.0 * t + 0.2);
        const double h2 = t < 0.5 ? 0.5 : 2.0;
        const double cross = oracle.control.values(m, 0) * h2 -
                             oracle.control.values(m, 1) * h1;
        CHECK(std::abs(cross) < 1e-9 * (1.0 + oracle.control.values.row(m).norm()));
    }
}
