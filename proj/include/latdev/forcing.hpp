#ifndef LATDEV_FORCING_HPP
#define LATDEV_FORCING_HPP

#include <vector>

#include "latdev/lattice.hpp"

namespace latdev {

// Closed waveform menu: constant, sinusoid a*cos(omega*t + phase), or a
// right-continuous piecewise-constant table. The menu keeps every time-norm
// computable in closed form or by exact per-segment quadrature.
struct Waveform {
    enum class Kind { constant, sinusoid, table };
    Kind kind = Kind::constant;
    double value = 0.0;      // constant
    double amplitude = 0.0;  // sinusoid
    double omega = 0.0;
    double phase = 0.0;
    std::vector<double> times;   // table breakpoints, times[0] == 0
    std::vector<double> values;  // table levels on [times[j], times[j+1])

    double operator()(double t) const;
    double sup_abs() const;  // sup over t >= 0 of |w(t)|

    static Waveform constant(double c);
    static Waveform sinusoid(double a, double omega, double phase = 0.0);
    static Waveform table(std::vector<double> times, std::vector<double> values);
};

// Finitely supported per-site time signal g(t) (or h_k(t)).
struct ForcingTerm {
    std::vector<int> site;
    Waveform wave;
    long flat = -1;  // resolved against the model window
};

struct ForcingSpec {
    std::vector<ForcingTerm> terms;

    bool empty() const { return terms.empty(); }
    void bind(const LatticeWindow& window);
    void add_to(double t, State& out, double scale = 1.0) const;
    State eval(double t, const LatticeWindow& window) const;

    // Certified bound on sup_{t} ||g(t)|| (per-site triangle inequality).
    double sup_norm_bound() const;

    // int_0^T ||g(t)||^2 dt by per-segment composite Simpson, with segments
    // split at every table breakpoint so the integrand is smooth per panel.
    double integral_sq(double horizon) const;
};

}  // namespace latdev

#endif
