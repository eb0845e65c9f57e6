#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latdev/benchmarks.hpp"
#include "latdev/ldp.hpp"

using namespace latdev;

namespace {

// OU benchmark tail: P(u(1) >= level) with u(0) = 0 is Q(level / sqrt(eps s^2)).
double ou_tail(double level, double eps) {
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    return gaussian_tail(level / std::sqrt(eps * s_sq));
}

}  // namespace

TEST_CASE("gaussian tail helpers") {
    CHECK(gaussian_tail(0.0) == doctest::Approx(0.5));
    CHECK(gaussian_tail(1.96) == doctest::Approx(0.025).epsilon(1e-3));
    // log branch agrees with the direct branch where both are valid
    for (double z : {1.0, 5.0, 10.0, 25.0}) {
        CHECK(log_gaussian_tail(z) == doctest::Approx(std::log(gaussian_tail(z))).epsilon(1e-10));
    }
    // asymptotic branch stays finite far beyond erfc underflow
    CHECK(std::isfinite(log_gaussian_tail(50.0)));
    CHECK(log_gaussian_tail(50.0) < -1000.0);
}

TEST_CASE("proportion intervals") {
    const ProportionCI ci = proportion_ci(500, 1000);
    CHECK(ci.p_hat == doctest::Approx(0.5));
    CHECK(ci.ci_low < 0.5);
    CHECK(ci.ci_high > 0.5);
    CHECK(!ci.exact);

    const ProportionCI few = proportion_ci(3, 1000);
    CHECK(few.exact);  // Clopper-Pearson fallback
    CHECK(few.ci_low < 0.003);
    CHECK(few.ci_high > 0.003);
    CHECK(few.ci_low > 0.0);

    const ProportionCI zero = proportion_ci(0, 1000);
    CHECK(zero.zero_hits);
    CHECK(zero.ci_low == 0.0);
    // exact upper bound for zero hits: 1 - (alpha/2)^{1/n}
    CHECK(zero.ci_high == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 1000)).epsilon(1e-6));
}

TEST_CASE("always and impossible events") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 100);
    cfg.eps = 0.0;  // deterministic paths
    cfg.ensemble_size = 50;
    cfg.seed = 1;
    const State u0 = State::zero(spec.window);

    const TailResult whole = tail_probability(spec, cfg, u0, EventSpec::always());
    CHECK(whole.p_hat == 1.0);

    const EventSpec impossible =
        EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 5.0);
    const TailResult none = tail_probability(spec, cfg, u0, impossible);
    CHECK(none.p_hat == 0.0);
    CHECK(none.zero_hits);
    CHECK(none.ci_high > 0.0);  // upper bound still reported
}

TEST_CASE("OU tail probability within 3 SE of the Gaussian oracle") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 200);
    cfg.eps = 0.5;
    cfg.ensemble_size = 200000;
    cfg.seed = 77;
    cfg.threads = 2;
    const State u0 = State::zero(spec.window);
    const EventSpec event = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);

    const TailResult tr = tail_probability(spec, cfg, u0, event);
    const double p_exact = ou_tail(1.0, 0.5);
    const double se = std::sqrt(p_exact * (1.0 - p_exact) / cfg.ensemble_size);
    CHECK(std::abs(tr.p_hat - p_exact) < 3.0 * se);
}

TEST_CASE("estimator sanity: disjoint seed ranges agree within joint CI") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 200);
    cfg.eps = 0.5;
    cfg.ensemble_size = 50000;
    cfg.seed = 31;
    cfg.threads = 2;
    const State u0 = State::zero(spec.window);
    const EventSpec event = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);

    const TailResult a = tail_probability(spec, cfg, u0, event);
    cfg.sample_offset = cfg.ensemble_size;
    const TailResult b = tail_probability(spec, cfg, u0, event);
    const double joint =
        std::hypot(a.plain.p_hat - a.plain.ci_low, b.plain.p_hat - b.plain.ci_low);
    CHECK(std::abs(a.p_hat - b.p_hat) <= joint);
}

TEST_CASE("importance sampling agrees with plain MC and shrinks the CI") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 200);
    cfg.eps = 0.2;
    cfg.ensemble_size = 20000;
    cfg.seed = 513;
    cfg.threads = 2;
    const State u0 = State::zero(spec.window);
    const EventSpec event = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);
    const double p_exact = ou_tail(1.0, 0.2);

    // tilt toward the event with the minimal-cost control pushing u(T) to 1
    RateOptions opt;
    opt.penalties = {1e2, 1e3, 1e4, 1e5, 1e6};
    const RateEstimate pushed =
        endpoint_rate(spec, cfg.grid, u0, State::unit(spec.window, {0}), 1.0, opt);
    const TailResult is = tail_probability(spec, cfg, u0, event, pushed.control);
    CHECK(is.importance_sampled);
    CHECK(std::abs(is.p_hat - p_exact) < 5.0 * (is.ci_high - is.p_hat) + 0.05 * p_exact);

    cfg.ensemble_size = 200000;
    const TailResult plain = tail_probability(spec, cfg, u0, event);
    // IS at 10x fewer samples should still beat plain MC's interval width
    CHECK((is.ci_high - is.ci_low) < (plain.ci_high - plain.ci_low) * 2.0);
    CHECK(std::abs(is.p_hat - plain.p_hat) <
          3.0 * ((is.ci_high - is.ci_low) + (plain.ci_high - plain.ci_low)));
}

TEST_CASE("ldp curve rows approach the rate from above") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 200);
    cfg.seed = 99;
    cfg.threads = 2;
    const State u0 = State::zero(spec.window);
    const EventSpec event = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), 1.0);

    const auto rows = ldp_curve(spec, cfg, u0, event, {0.5, 0.2}, {200000, 200000});
    REQUIRE(rows.size() == 2);
    const double rate = 1.0 / (1.0 - std::exp(-2.0));
    CHECK(rows[0].minus_eps_log_p == doctest::Approx(2.08).epsilon(0.05));
    CHECK(rows[1].minus_eps_log_p == doctest::Approx(1.60).epsilon(0.05));
    CHECK(rows[0].minus_eps_log_p > rows[1].minus_eps_log_p);
    CHECK(rows[1].minus_eps_log_p > rate);

    // analytic extrapolation: within 5% of the rate at eps = 0.01
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double extrap = -0.01 * log_gaussian_tail(1.0 / std::sqrt(0.01 * s_sq));
    CHECK(std::abs(extrap - rate) / rate < 0.05);

    // zero-rate event (deterministic endpoint in the interior): curve ~ 0
    const EventSpec easy = EventSpec::endpoint_halfspace(State::unit(spec.window, {0}), -1.0);
    const auto easy_rows = ldp_curve(spec, cfg, u0, easy, {0.5}, {10000});
    CHECK(easy_rows[0].p_hat > 0.95);
    CHECK(easy_rows[0].minus_eps_log_p < 0.05);
}

TEST_CASE("laplace functional: constant H is exact at any eps") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 100);
    cfg.eps = 0.05;
    cfg.ensemble_size = 1000;
    cfg.seed = 3;
    const LaplaceResult r = laplace_functional(spec, cfg, State::zero(spec.window),
                                               [](const Trajectory&) { return 2.5; });
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.ci_half == doctest::Approx(0.0));
}

TEST_CASE("laplace functional on the OU benchmark") {
    const ModelSpec spec = bench::ou_additive();
    const State u0 = State::unit(spec.window, {0});
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double m = std::exp(-1.0);

    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 400);
    cfg.eps = 0.05;
    cfg.ensemble_size = 100000;
    cfg.seed = 12;
    cfg.threads = 2;
    const LaplaceResult r = laplace_functional(spec, cfg, u0, [](const Trajectory& path) {
        return path.states.row(path.grid.steps).squaredNorm();
    });
    const double exact = 0.5 * cfg.eps * std::log(1.0 + 2.0 * s_sq) + m * m / (1.0 + 2.0 * s_sq);
    CHECK(std::abs(r.value - exact) < 0.02 * exact + 3.0 * r.ci_half);

    // indicator-style bounded H: almost-sure small values give ~0
    const LaplaceResult safe = laplace_functional(spec, cfg, u0, [](const Trajectory& path) {
        return path.sup_norm() > 100.0 ? 1e6 : 0.0;
    });
    CHECK(safe.value == doctest::Approx(0.0));
}

TEST_CASE("laplace companion optimizer hits the variational limit") {
    const ModelSpec spec = bench::ou_additive();
    const State u0 = State::unit(spec.window, {0});
    const TimeGrid grid(1.0, 400);
    TerminalObjective H;
    H.value = [](const State& uT) { return uT.values.squaredNorm(); };
    H.gradient = [](const State& uT) -> Vector { return 2.0 * uT.values; };

    const LaplaceInfResult inf = laplace_inf(spec, grid, u0, H);
    const double s_sq = (1.0 - std::exp(-2.0)) / 2.0;
    const double m = std::exp(-1.0);
    const double limit = m * m / (1.0 + 2.0 * s_sq);
    CHECK(std::abs(inf.value - limit) / limit < 0.01);
    CHECK(inf.converged);
}

TEST_CASE("h1 probe distances decay like sqrt(eps) in the additive case") {
    const ModelSpec spec = bench::ou_additive();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 400);
    cfg.seed = 21;
    cfg.threads = 2;
    const State u0 = State::zero(spec.window);
    Control v(cfg.grid, 1);
    v.values.setOnes();

    const auto rows = h1_probe(spec, cfg, u0, v, {1e-1, 1e-2, 1e-3}, 1500);
    REQUIRE(rows.size() == 3);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i + 1].distance.mean < rows[i].distance.mean);
        const double ratio = rows[i].distance.mean / rows[i + 1].distance.mean;
        CHECK(std::abs(ratio / std::sqrt(10.0) - 1.0) < 0.3);
    }
}

TEST_CASE("h1 probe is exactly zero for frozen noiseless dynamics") {
    ModelSpec frozen;
    frozen.window = LatticeWindow(1, 0);
    frozen.drift.nu = 1e-12;
    frozen.bind();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 50);
    cfg.seed = 4;
    const auto rows =
        h1_probe(frozen, cfg, State::zero(frozen.window), Control(cfg.grid, 0), {1e-1, 1e-2}, 10);
    for (const auto& r : rows) CHECK(r.distance.mean == 0.0);
}

TEST_CASE("h1 probe decreases on the multiplicative benchmark") {
    const ModelSpec spec = bench::tanh_lattice();
    SdeConfig cfg;
    cfg.grid = TimeGrid(1.0, 400);
    cfg.seed = 22;
    cfg.threads = 2;
    Control v(cfg.grid, 2);
    v.values.setConstant(0.5);
    const auto rows = h1_probe(spec, cfg, State::zero(spec.window), v, {1e-1, 1e-2, 1e-3}, 800);
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        CHECK(rows[i + 1].distance.mean < rows[i].distance.mean);
}

TEST_CASE("log_mean_exp survives extreme scales") {
    CHECK(log_mean_exp({-1000.0, -1000.0}) == doctest::Approx(-1000.0));
    CHECK(log_mean_exp({0.0, std::log(3.0)}) == doctest::Approx(std::log(2.0)));
    const double huge = log_mean_exp({-1e6, -2e6});
    CHECK(std::isfinite(huge));
}
