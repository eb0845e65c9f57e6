#include "latdev/benchmarks.hpp"

#include <numbers>

namespace latdev::bench {

ModelSpec ou_additive() {
    ModelSpec spec;
    spec.window = LatticeWindow(1, 0);
    spec.horizon = 1.0;
    spec.drift.nu = 0.5;  // single site: A u = 2 u, so the decay rate is 1
    spec.drift.gamma = 0.0;
    spec.drift.f0 = Polynomial{};

    ModeSpec mode;
    mode.sigma0.kind = Sigma0::Kind::zero;
    mode.h.terms.push_back({{0}, Waveform::constant(1.0), -1});
    spec.noise.modes.push_back(std::move(mode));

    spec.bind();
    return spec;
}

ModelSpec tanh_lattice() {
    ModelSpec spec;
    spec.window = LatticeWindow(1, 2);
    spec.horizon = 1.0;
    spec.drift.nu = 0.5;
    spec.drift.gamma = -1.0;
    spec.drift.f0 = Polynomial({0.0, -1.0, 0.0, 1.0});  // F0(s) = s^3 - s
    spec.drift.g.terms.push_back({{0}, Waveform::constant(0.25), -1});
    spec.drift.g.terms.push_back(
        {{1}, Waveform::sinusoid(0.3, 2.0 * std::numbers::pi, 0.0), -1});

    ModeSpec tanh_mode;
    tanh_mode.sigma0.kind = Sigma0::Kind::tanh;
    tanh_mode.sigma0.scale = 0.5;
    tanh_mode.delta.push_back({{-1}, 0.6, -1});
    tanh_mode.delta.push_back({{0}, 0.8, -1});
    tanh_mode.h.terms.push_back({{1}, Waveform::constant(0.4), -1});
    spec.noise.modes.push_back(std::move(tanh_mode));

    ModeSpec linear_mode;
    linear_mode.sigma0.kind = Sigma0::Kind::linear;
    linear_mode.sigma0.scale = 0.3;
    linear_mode.delta.push_back({{1}, 0.5, -1});
    linear_mode.h.terms.push_back({{-1}, Waveform::constant(0.3), -1});
    spec.noise.modes.push_back(std::move(linear_mode));

    spec.bind();
    return spec;
}

}  // namespace latdev::bench
