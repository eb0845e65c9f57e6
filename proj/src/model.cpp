#include "latdev/model.hpp"

#include <cmath>
#include <limits>

namespace latdev {

double Sigma0::operator()(double s) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::linear:
            return scale * s;
        case Kind::tanh:
            return scale * std::tanh(s);
    }
    return 0.0;
}

double Sigma0::derivative(double s) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::linear:
            return scale;
        case Kind::tanh: {
            const double th = std::tanh(s);
            return scale * (1.0 - th * th);
        }
    }
    return 0.0;
}

double ModeSpec::delta_norm_sq() const {
    double acc = 0.0;
    for (const DeltaEntry& d : delta) acc += d.value * d.value;
    return acc;
}

Polynomial DriftSpec::f() const {
    std::vector<double> c = f0.coeffs();
    if (c.size() < 2) c.resize(2, 0.0);
    c[1] -= gamma;
    return Polynomial(std::move(c));
}

void ModelSpec::bind() {
    drift.g.bind(window);
    for (ModeSpec& mode : noise.modes) {
        mode.h.bind(window);
        for (DeltaEntry& d : mode.delta) d.flat = window.flat_index(d.site);
    }
}

void ValidationReport::raise_if_invalid() const {
    if (!valid && !violations.empty())
        throw ConditionViolated(violations.front().condition, violations.front().message);
}

ValidationReport validate(const ModelSpec& spec, double lipschitz_radius) {
    ValidationReport rep;
    rep.lipschitz_radius = lipschitz_radius;

    auto fail = [&rep](const std::string& cond, const std::string& msg) {
        rep.violations.push_back({cond, msg});
    };

    if (!(spec.drift.nu > 0.0)) fail("nu", "nu must be > 0, got " + std::to_string(spec.drift.nu));
    if (!(spec.horizon > 0.0)) fail("horizon", "horizon must be > 0");
    if (spec.drift.gamma > 0.0)
        fail("F1", "gamma must be <= 0 (requires F0'(s) >= gamma with gamma <= 0), got " +
                       std::to_string(spec.drift.gamma));

    if (spec.drift.f0.coeff(0) != 0.0)
        fail("F0", "F0(0) must equal 0, got constant coefficient " +
                       std::to_string(spec.drift.f0.coeff(0)));

    rep.min_f0_prime = global_min(spec.drift.f0.derivative());
    if (!(rep.min_f0_prime >= spec.drift.gamma)) {
        fail("F1", "inf F0' = " + std::to_string(rep.min_f0_prime) + " < gamma = " +
                       std::to_string(spec.drift.gamma) + " (requires F0'(s) >= gamma)");
    }

    rep.alpha = model_alpha(spec);
    rep.delta_norm_sq = model_delta_norm_sq(spec);
    rep.sigma_lipschitz = model_sigma_lipschitz(spec);
    rep.h_linf_sum = model_h_linf_sum(spec);
    rep.g_l2_sq = model_g_l2_sq(spec);

    // Local Lipschitz constant of f on [-R, R]; f' >= 0 once (F1) holds.
    rep.f_lipschitz =
        max_abs_on_interval(spec.drift.f().derivative(), -lipschitz_radius, lipschitz_radius);

    rep.valid = rep.violations.empty();
    return rep;
}

namespace {

void check_mode(const ModelSpec& spec, int k) {
    if (k < 1 || k > spec.mode_count())
        throw DimensionMismatch("mode " + std::to_string(k) + " out of range 1.." +
                                std::to_string(spec.mode_count()));
}

void check_state(const ModelSpec& spec, const State& u, const char* what) {
    if (u.window != spec.window)
        throw DimensionMismatch(std::string(what) + ": state window mismatch with the model");
}

}  // namespace

State f_eval(const ModelSpec& spec, const State& u) {
    check_state(spec, u, "f_eval");
    const Polynomial f = spec.drift.f();
    State out = State::zero(spec.window);
    for (long i = 0; i < u.values.size(); ++i) out.values[i] = f(u.values[i]);
    return out;
}

void drift_into(const ModelSpec& spec, const Polynomial& f, double t, const State& u,
                State& out) {
    check_state(spec, u, "drift");
    apply_A_into(u, out);
    for (long i = 0; i < u.values.size(); ++i) {
        out.values[i] = -spec.drift.nu * out.values[i] - f(u.values[i]) -
                        spec.drift.gamma * u.values[i];
    }
    spec.drift.g.add_to(t, out);
}

State drift(const ModelSpec& spec, double t, const State& u) {
    State out = State::zero(spec.window);
    drift_into(spec, spec.drift.f(), t, u, out);
    return out;
}

State sigma_k_eval(const ModelSpec& spec, int k, const State& u) {
    check_mode(spec, k);
    check_state(spec, u, "sigma_k_eval");
    const ModeSpec& mode = spec.noise.modes[k - 1];
    State out = State::zero(spec.window);
    for (const DeltaEntry& d : mode.delta)
        out.values[d.flat] = d.value * mode.sigma0(u.values[d.flat]);
    return out;
}

void sigma_apply_add(const ModelSpec& spec, double t, const State& u, const Vector& z,
                     double scale, State& out) {
    check_state(spec, u, "sigma_apply");
    if (z.size() != spec.mode_count())
        throw DimensionMismatch("mode vector has size " + std::to_string(z.size()) +
                                ", model has " + std::to_string(spec.mode_count()) + " modes");
    for (int k = 0; k < spec.mode_count(); ++k) {
        const double zk = z[k];
        if (zk == 0.0) continue;
        const ModeSpec& mode = spec.noise.modes[k];
        mode.h.add_to(t, out, scale * zk);
        for (const DeltaEntry& d : mode.delta)
            out.values[d.flat] += scale * zk * d.value * mode.sigma0(u.values[d.flat]);
    }
}

State sigma_apply(const ModelSpec& spec, double t, const State& u, const Vector& z) {
    State out = State::zero(spec.window);
    sigma_apply_add(spec, t, u, z, 1.0, out);
    return out;
}

double sigma_hs_norm_sq(const ModelSpec& spec, double t, const State& u) {
    double acc = 0.0;
    for (int k = 1; k <= spec.mode_count(); ++k) {
        const ModeSpec& mode = spec.noise.modes[k - 1];
        State col = sigma_k_eval(spec, k, u);
        mode.h.add_to(t, col);
        acc += col.values.squaredNorm();
    }
    return acc;
}

double model_alpha(const ModelSpec& spec) {
    double a = 0.0;
    for (const ModeSpec& m : spec.noise.modes) a = std::max(a, m.sigma0.growth_alpha());
    return a;
}

double model_delta_norm_sq(const ModelSpec& spec) {
    double acc = 0.0;
    for (const ModeSpec& m : spec.noise.modes) acc += m.delta_norm_sq();
    return acc;
}

double model_sigma_lipschitz(const ModelSpec& spec) {
    double a = 0.0;
    for (const ModeSpec& m : spec.noise.modes) a = std::max(a, m.sigma0.lipschitz());
    return a;
}

double model_h_linf_sum(const ModelSpec& spec) {
    double acc = 0.0;
    for (const ModeSpec& m : spec.noise.modes) {
        const double b = m.h.sup_norm_bound();
        acc += b * b;
    }
    return acc;
}

double model_g_l2_sq(const ModelSpec& spec) { return spec.drift.g.integral_sq(spec.horizon); }

}  // namespace latdev
