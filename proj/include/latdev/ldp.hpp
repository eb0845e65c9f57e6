#ifndef LATDEV_LDP_HPP
#define LATDEV_LDP_HPP

#include <functional>
#include <optional>
#include <vector>

#include "latdev/rate.hpp"
#include "latdev/sde.hpp"
#include "latdev/skeleton.hpp"

namespace latdev {

// Borel sets of path space we can score trajectories against.
struct EventSpec {
    enum class Kind { endpoint_halfspace, supball_exit, always };
    Kind kind = Kind::always;
    State c;              // endpoint functional direction
    double level = 0.0;   // threshold delta
    Trajectory phi_ref;   // reference path for the exit event

    bool contains(const Trajectory& path) const;

    static EventSpec endpoint_halfspace(State c, double level);
    static EventSpec supball_exit(Trajectory phi_ref, double level);
    static EventSpec always();
};

struct TailResult {
    ProportionCI plain;        // meaningful unless importance sampling is on
    double p_hat = 0.0;        // final estimate (weighted when IS is on)
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool zero_hits = false;
    bool importance_sampled = false;
};

// Hit fraction of the event under the eps-scaled dynamics. With a tilt
// control the shifted system is simulated and each sample reweighted by the
// explicit Girsanov exponent of the finite mode family.
TailResult tail_probability(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                            const EventSpec& event,
                            const std::optional<Control>& tilt = std::nullopt);

struct LdpCurveRow {
    double eps = 0.0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double minus_eps_log_p = 0.0;
    long hits = 0;
    long ensemble = 0;
    bool censored = false;  // zero hits: only an upper bound is available
};

std::vector<LdpCurveRow> ldp_curve(const ModelSpec& spec, const SdeConfig& base_config,
                                   const State& u0, const EventSpec& event,
                                   const std::vector<double>& eps_list,
                                   const std::vector<long>& ensemble_sizes,
                                   const std::optional<Control>& tilt = std::nullopt);

struct LaplaceResult {
    double eps = 0.0;
    double value = 0.0;     // -eps log mean exp(-H/eps), via log-sum-exp
    double ci_half = 0.0;   // delta-method 95% half width on `value`
    long ensemble = 0;
};

LaplaceResult laplace_functional(const ModelSpec& spec, const SdeConfig& config, const State& u0,
                                 const std::function<double(const Trajectory&)>& functional);

// Companion variational value inf_v { H(u_v) + 1/2 int ||v||^2 } for a
// terminal functional, using the rate optimizer.
struct LaplaceInfResult {
    double value = 0.0;  // H(u_v*) + control cost
    double terminal = 0.0;
    double cost = 0.0;
    bool converged = false;
    long iterations = 0;
};

LaplaceInfResult laplace_inf(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                             const TerminalObjective& objective,
                             const RateOptions& options = {});

struct H1ProbeRow {
    double eps = 0.0;
    MeanCI distance;  // E sup_t ||u^eps_v(t) - u_v(t)||
};

// Controlled SDE against the deterministic skeleton for a fixed control:
// the distances should decay as eps -> 0 (O(sqrt(eps)) in additive regimes).
std::vector<H1ProbeRow> h1_probe(const ModelSpec& spec, const SdeConfig& base_config,
                                 const State& u0, const Control& v,
                                 const std::vector<double>& eps_list, long ensemble);

}  // namespace latdev

#endif
