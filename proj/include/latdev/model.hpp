#ifndef LATDEV_MODEL_HPP
#define LATDEV_MODEL_HPP

#include <string>
#include <vector>

#include "latdev/forcing.hpp"
#include "latdev/lattice.hpp"
#include "latdev/polynomial.hpp"

namespace latdev {

// Diffusion nonlinearity menu. Every member is globally Lipschitz with a
// closed-form constant and satisfies |sigma0(s)| <= alpha (1 + |s|).
struct Sigma0 {
    enum class Kind { zero, linear, tanh };
    Kind kind = Kind::zero;
    double scale = 0.0;

    double operator()(double s) const;
    double derivative(double s) const;
    double lipschitz() const { return kind == Kind::zero ? 0.0 : std::abs(scale); }
    double growth_alpha() const { return kind == Kind::zero ? 0.0 : std::abs(scale); }
};

struct DeltaEntry {
    std::vector<int> site;
    double value = 0.0;
    long flat = -1;
};

// One retained Wiener mode: sigma_k(u)_i = delta_{k,i} * sigma0_k(u_i),
// plus the additive channel h_k(t).
struct ModeSpec {
    Sigma0 sigma0;
    std::vector<DeltaEntry> delta;
    ForcingSpec h;

    double delta_norm_sq() const;
};

struct DriftSpec {
    double nu = 1.0;      // > 0
    double gamma = 0.0;   // <= 0
    Polynomial f0;        // F0, with F0(0) = 0
    ForcingSpec g;

    // f(s) = F0(s) - gamma s, so f(0) = 0 and f' = F0' - gamma >= 0.
    Polynomial f() const;
};

struct NoiseSpec {
    std::vector<ModeSpec> modes;
    int mode_count() const { return static_cast<int>(modes.size()); }
};

struct ModelSpec {
    LatticeWindow window;
    DriftSpec drift;
    NoiseSpec noise;
    double horizon = 1.0;

    // Resolve every referenced site against the window. Must be called once
    // before evaluation; from-JSON construction does it automatically.
    void bind();

    int mode_count() const { return noise.mode_count(); }
};

struct ValidationIssue {
    std::string condition;
    std::string message;
};

struct ValidationReport {
    bool valid = false;
    std::vector<ValidationIssue> violations;

    double alpha = 0.0;            // growth constant of the sigma0 family
    double delta_norm_sq = 0.0;    // ||delta||^2 summed over modes and sites
    double sigma_lipschitz = 0.0;  // global Lipschitz constant of the sigma0 family
    double min_f0_prime = 0.0;     // exact global minimum of F0'
    double lipschitz_radius = 0.0;
    double f_lipschitz = 0.0;      // max of f' on [-R, R]
    double g_l2_sq = 0.0;          // int_0^T ||g||^2 dt
    double h_linf_sum = 0.0;       // sum_k ||h_k||^2_{Linf(0,T)}

    void raise_if_invalid() const;  // throws ConditionViolated on first failure
};

// Machine-checks the structural conditions: F0(0) = 0, inf F0' >= gamma
// (computed exactly from the real roots of F0''), gamma <= 0, nu > 0, and
// reports alpha, ||delta||^2 and the local Lipschitz constant of f on the
// ball of radius `lipschitz_radius`.
ValidationReport validate(const ModelSpec& spec, double lipschitz_radius = 5.0);

State f_eval(const ModelSpec& spec, const State& u);

// -nu A u - f(u) - gamma u + g(t)
State drift(const ModelSpec& spec, double t, const State& u);

// Hot-path variant: the caller hoists f = spec.drift.f() once per run and
// provides the output buffer; `out` is overwritten.
void drift_into(const ModelSpec& spec, const Polynomial& f, double t, const State& u, State& out);

// sigma_k(u), 1-based mode index; h_k is not included.
State sigma_k_eval(const ModelSpec& spec, int k, const State& u);

// sum_k (h_k(t) + sigma_k(u)) z_k, the diffusion operator applied to a mode vector.
State sigma_apply(const ModelSpec& spec, double t, const State& u, const Vector& z);
void sigma_apply_add(const ModelSpec& spec, double t, const State& u, const Vector& z,
                     double scale, State& out);

// Squared Hilbert-Schmidt norm sum_k ||h_k(t) + sigma_k(u)||^2.
double sigma_hs_norm_sq(const ModelSpec& spec, double t, const State& u);

double model_alpha(const ModelSpec& spec);
double model_delta_norm_sq(const ModelSpec& spec);
double model_sigma_lipschitz(const ModelSpec& spec);
double model_h_linf_sum(const ModelSpec& spec);
double model_g_l2_sq(const ModelSpec& spec);

}  // namespace latdev

#endif
