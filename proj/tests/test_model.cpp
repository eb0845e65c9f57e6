#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "latdev/benchmarks.hpp"
#include "latdev/json_io.hpp"
#include "latdev/model.hpp"
#include "latdev/rng.hpp"

using namespace latdev;

namespace {

ModelSpec cubic_single_site(double gamma) {
    ModelSpec spec;
    spec.window = LatticeWindow(1, 0);
    spec.horizon = 1.0;
    spec.drift.nu = 0.5;
    spec.drift.gamma = gamma;
    spec.drift.f0 = Polynomial({0.0, -1.0, 0.0, 1.0});  // s^3 - s
    spec.bind();
    return spec;
}

State random_ball_state(const LatticeWindow& w, const CounterRng& rng, uint64_t sample,
                        double radius) {
    State s = State::zero(w);
    for (long i = 0; i < w.site_count(); ++i)
        s.values[i] = 2.0 * rng.uniform(sample, static_cast<uint32_t>(i), 0,
                                        RngPurpose::test_vectors) -
                      1.0;
    if (s.norm() > radius) s.values *= radius / s.norm();
    return s;
}

}  // namespace

TEST_CASE("polynomial roots and minima") {
    const Polynomial p({-1.0, 0.0, 3.0});  // 3 s^2 - 1 = F0' for s^3 - s
    CHECK(global_min(p) == doctest::Approx(-1.0));

    const Polynomial unbounded({0.0, -2.0});  // F0' of -s^2
    CHECK(global_min(unbounded) == -std::numeric_limits<double>::infinity());

    const Polynomial cubic({0.0, -1.0, 0.0, 1.0});
    const auto roots = real_roots(cubic);  // s(s-1)(s+1)
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-1.0));
    CHECK(roots[1] == doctest::Approx(0.0));
    CHECK(roots[2] == doctest::Approx(1.0));

    CHECK(global_min(Polynomial{}) == 0.0);
    CHECK(max_abs_on_interval(p, -2.0, 2.0) == doctest::Approx(11.0));
}

TEST_CASE("validate accepts the classical nonlinearity") {
    const ValidationReport rep = validate(cubic_single_site(-1.0), 5.0);
    CHECK(rep.valid);
    CHECK(rep.min_f0_prime == doctest::Approx(-1.0));
    // f = s^3, f' = 3 s^2, max on [-5, 5] is 75
    CHECK(rep.f_lipschitz == doctest::Approx(75.0));
}

TEST_CASE("validate rejects gamma above the derivative infimum") {
    const ValidationReport rep = validate(cubic_single_site(0.0));
    CHECK(!rep.valid);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().condition == "F1");
    CHECK_THROWS_AS(rep.raise_if_invalid(), ConditionViolated);
}

TEST_CASE("validate rejects even-degree drift") {
    ModelSpec spec = cubic_single_site(-1.0);
    spec.drift.f0 = Polynomial({0.0, 0.0, -1.0});  // -s^2
    const ValidationReport rep = validate(spec);
    CHECK(!rep.valid);
    CHECK(rep.violations.front().condition == "F1");
}

TEST_CASE("validate rejects F0(0) != 0") {
    ModelSpec spec = cubic_single_site(-1.0);
    spec.drift.f0 = Polynomial({0.5, 0.0, 0.0, 1.0});
    const ValidationReport rep = validate(spec);
    CHECK(!rep.valid);
    CHECK(rep.violations.front().condition == "F0");
}

TEST_CASE("f evaluation") {
    const ModelSpec spec = cubic_single_site(-1.0);  // f(s) = s^3
    State u(spec.window, (Vector(1) << 2.0).finished());
    CHECK(f_eval(spec, u).values[0] == doctest::Approx(8.0));

    CHECK(f_eval(spec, State::zero(spec.window)).values[0] == 0.0);

    State a(spec.window, (Vector(1) << 1.0).finished());
    State b(spec.window, (Vector(1) << -1.0).finished());
    const double inner =
        (f_eval(spec, a).values - f_eval(spec, b).values).dot(a.values - b.values);
    CHECK(inner == doctest::Approx(4.0));
}

TEST_CASE("drift assembles all terms") {
    {  // single site, A u = 2u
        ModelSpec spec;
        spec.window = LatticeWindow(1, 0);
        spec.drift.nu = 0.5;
        spec.bind();
        State u(spec.window, (Vector(1) << 1.0).finished());
        CHECK(drift(spec, 0.0, u).values[0] == doctest::Approx(-1.0));
        CHECK(drift(spec, 0.0, State::zero(spec.window)).values[0] == 0.0);
    }
    {
        ModelSpec spec = cubic_single_site(-1.0);
        spec.drift.g.terms.push_back({{0}, Waveform::constant(0.5), -1});
        spec.bind();
        State u(spec.window, (Vector(1) << 1.0).finished());
        // -nu A u - f(u) - gamma u + g = -1 - 1 + 1 + 0.5
        CHECK(drift(spec, 0.3, u).values[0] == doctest::Approx(-0.5));
    }
}

TEST_CASE("sigma operators") {
    ModelSpec spec;
    spec.window = LatticeWindow(1, 0);
    spec.horizon = 1.0;
    spec.drift.nu = 0.5;
    ModeSpec m1;
    m1.sigma0 = {Sigma0::Kind::linear, 1.0};
    m1.delta.push_back({{0}, 1.0, -1});
    ModeSpec m2;
    m2.sigma0 = {Sigma0::Kind::linear, 0.5};
    m2.delta.push_back({{0}, 1.0, -1});
    spec.noise.modes = {m1, m2};
    spec.bind();

    State u(spec.window, (Vector(1) << 2.0).finished());
    CHECK(sigma_k_eval(spec, 1, u).values[0] == doctest::Approx(2.0));
    CHECK(sigma_k_eval(spec, 2, u).values[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(sigma_k_eval(spec, 3, u), DimensionMismatch);

    Vector z(2);
    z << 1.0, 1.0;
    CHECK(sigma_apply(spec, 0.0, u, z).values[0] == doctest::Approx(3.0));
    CHECK(sigma_apply(spec, 0.0, u, Vector::Zero(2)).norm() == 0.0);
    CHECK_THROWS_AS(sigma_apply(spec, 0.0, u, Vector::Zero(3)), DimensionMismatch);

    CHECK(sigma_hs_norm_sq(spec, 0.0, u) == doctest::Approx(5.0));  // 4 + 1

    // tanh and zero kinds
    ModelSpec tspec;
    tspec.window = LatticeWindow(1, 0);
    tspec.drift.nu = 0.5;
    ModeSpec tm;
    tm.sigma0 = {Sigma0::Kind::tanh, 0.5};
    tm.delta.push_back({{0}, 0.5, -1});
    tspec.noise.modes = {tm};
    tspec.bind();
    CHECK(sigma_k_eval(tspec, 1, State::zero(tspec.window)).values[0] == 0.0);
}

TEST_CASE("additive mode with h only") {
    ModelSpec spec;
    spec.window = LatticeWindow(1, 0);
    spec.drift.nu = 0.5;
    ModeSpec m;
    m.sigma0.kind = Sigma0::Kind::zero;
    m.h.terms.push_back({{0}, Waveform::constant(1.0), -1});
    spec.noise.modes = {m};
    spec.bind();

    Vector z(1);
    z << 3.0;
    CHECK(sigma_apply(spec, 0.0, State::zero(spec.window), z).values[0] == doctest::Approx(3.0));
}

TEST_CASE("structural inequalities on random samples") {
    const ModelSpec spec = bench::tanh_lattice();
    const ValidationReport rep = validate(spec, 5.0);
    REQUIRE(rep.valid);

    const CounterRng rng(3);
    const double a2d2 = rep.alpha * rep.alpha * rep.delta_norm_sq;
    for (uint64_t i = 0; i < 1000; ++i) {
        const State u = random_ball_state(spec.window, rng, 2 * i, 5.0);
        const State v = random_ball_state(spec.window, rng, 2 * i + 1, 5.0);

        const double mono =
            (f_eval(spec, u).values - f_eval(spec, v).values).dot(u.values - v.values);
        CHECK(mono >= -1e-12);

        double growth = 0.0, lip = 0.0;
        for (int k = 1; k <= spec.mode_count(); ++k) {
            growth += sigma_k_eval(spec, k, u).squared_norm();
            lip += (sigma_k_eval(spec, k, u).values - sigma_k_eval(spec, k, v).values)
                       .squaredNorm();
        }
        CHECK(growth <= 2.0 * a2d2 * (1.0 + u.squared_norm()) * (1.0 + 1e-12));
        CHECK(lip <= rep.sigma_lipschitz * rep.sigma_lipschitz * rep.delta_norm_sq *
                             (u.values - v.values).squaredNorm() * (1.0 + 1e-12) +
                         1e-30);
        CHECK((f_eval(spec, u).values - f_eval(spec, v).values).norm() <=
              rep.f_lipschitz * (u.values - v.values).norm() * (1.0 + 1e-12) + 1e-30);

        const double hs = sigma_hs_norm_sq(spec, 0.25, u);
        CHECK(hs <= 2.0 * model_h_linf_sum(spec) +
                        4.0 * a2d2 * (1.0 + u.squared_norm()) + 1e-12);
    }
}

TEST_CASE("forcing norms") {
    ForcingSpec g;
    g.terms.push_back({{0}, Waveform::constant(2.0), -1});
    const LatticeWindow w(1, 1);
    g.bind(w);
    CHECK(g.sup_norm_bound() == doctest::Approx(2.0));
    CHECK(g.integral_sq(1.0) == doctest::Approx(4.0));

    ForcingSpec sin_g;
    sin_g.terms.push_back({{0}, Waveform::sinusoid(1.0, 2.0 * std::numbers::pi, 0.0), -1});
    sin_g.bind(w);
    // int_0^1 cos^2(2 pi t) dt = 1/2
    CHECK(sin_g.integral_sq(1.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sin_g.sup_norm_bound() == doctest::Approx(1.0));

    ForcingSpec table_g;
    table_g.terms.push_back({{0}, Waveform::table({0.0, 0.5}, {2.0, 1.0}), -1});
    table_g.bind(w);
    CHECK(table_g.integral_sq(1.0) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(table_g.terms[0].wave(0.25) == 2.0);
    CHECK(table_g.terms[0].wave(0.75) == 1.0);
}

TEST_CASE("model JSON round trip and bundled config equivalence") {
    const ModelSpec built = bench::tanh_lattice();
    const Json j = to_json(built);
    const ModelSpec parsed = model_from_json(j);
    CHECK(to_json(parsed) == j);
    CHECK(parsed.mode_count() == 2);
    CHECK(validate(parsed).valid);

    const ModelSpec ou = bench::ou_additive();
    const ModelSpec ou2 = model_from_json(to_json(ou));
    CHECK(to_json(ou2) == to_json(ou));
}

TEST_CASE("config errors carry field context") {
    CHECK_THROWS_WITH_AS(model_from_json(Json{{"window", {{"dim", 1}, {"radius", 0}}}}),
                         doctest::Contains("missing field 'horizon'"), ConfigError);
    const Json bad = {{"window", {{"dim", 1}, {"radius", 0}}},
                      {"horizon", 1.0},
                      {"drift", {{"nu", "abc"}, {"gamma", 0.0}}}};
    CHECK_THROWS_WITH_AS(model_from_json(bad), doctest::Contains("model.drift.nu"), ConfigError);
}

TEST_CASE("state window mismatch is rejected by model evaluations") {
    const ModelSpec spec = bench::ou_additive();
    const State wrong = State::zero(LatticeWindow(1, 1));
    CHECK_THROWS_AS(f_eval(spec, wrong), DimensionMismatch);
    CHECK_THROWS_AS(drift(spec, 0.0, wrong), DimensionMismatch);
    CHECK_THROWS_AS(sigma_k_eval(spec, 1, wrong), DimensionMismatch);
    CHECK_THROWS_AS(sigma_apply(spec, 0.0, wrong, Vector::Zero(1)), DimensionMismatch);
}

TEST_CASE("polynomial edge cases") {
    // double root of the derivative: F0 = s^4 has F0'' = 12 s^2 with a
    // repeated root at 0; the minimum of F0' = 4 s^3 is still -inf
    CHECK(global_min(Polynomial({0, 0, 0, 4.0})) ==
          -std::numeric_limits<double>::infinity());
    // quartic with repeated critical structure: p = (s^2 - 1)^2
    const Polynomial p({1.0, 0.0, -2.0, 0.0, 1.0});
    CHECK(global_min(p) == doctest::Approx(0.0).epsilon(1e-12));
    const auto roots = real_roots(p);  // +-1, each a double root, reported once
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-1.0));
    CHECK(roots[1] == doctest::Approx(1.0));
    // constant and linear
    CHECK(global_min(Polynomial({3.0})) == 3.0);
    CHECK(real_roots(Polynomial({-2.0, 4.0})).front() == doctest::Approx(0.5));
}

TEST_CASE("waveform table validation") {
    CHECK_THROWS_AS(Waveform::table({0.5, 1.0}, {1.0, 2.0}), ConfigError);  // times[0] != 0
    CHECK_THROWS_AS(Waveform::table({0.0, 1.0}, {1.0}), ConfigError);       // length mismatch
    CHECK_THROWS_AS(Waveform::table({0.0, 0.4, 0.2}, {1, 2, 3}), ConfigError);  // unsorted
}

TEST_CASE("control and trajectory JSON round trips") {
    const TimeGrid grid(1.0, 8);
    Control c(grid, 2);
    for (int m = 0; m < 8; ++m) {
        c.values(m, 0) = 0.1 * m;
        c.values(m, 1) = std::sin(0.3 * m);
    }
    const Control c2 = control_from_json(to_json(c), grid, 2);
    CHECK((c.values - c2.values).norm() == 0.0);

    Trajectory t(grid, LatticeWindow(1, 1));
    t.states.setRandom();
    const Trajectory t2 = trajectory_from_json(to_json(t));
    CHECK((t.states - t2.states).norm() == 0.0);
    CHECK(t2.window == t.window);
}
