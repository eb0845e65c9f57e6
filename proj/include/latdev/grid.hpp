#ifndef LATDEV_GRID_HPP
#define LATDEV_GRID_HPP

#include <vector>

#include "latdev/errors.hpp"
#include "latdev/lattice.hpp"

namespace latdev {

struct TimeGrid {
    double horizon = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double T, int M) : horizon(T), steps(M) {
        if (!(T > 0.0) || M < 1) throw ConfigError("time grid needs horizon > 0 and steps >= 1");
    }

    double dt() const { return horizon / steps; }
    double node(int m) const { return horizon * m / steps; }

    bool operator==(const TimeGrid& o) const {
        return horizon == o.horizon && steps == o.steps;
    }
    bool operator!=(const TimeGrid& o) const { return !(*this == o); }
};

// Mode-space control path, piecewise constant on [t_m, t_{m+1}). The discrete
// stand-in for v in L^2(0,T; R^K).
struct Control {
    TimeGrid grid;
    Eigen::MatrixXd values;  // steps x K

    Control() = default;
    Control(const TimeGrid& g, int modes)
        : grid(g), values(Eigen::MatrixXd::Zero(g.steps, modes)) {}

    int modes() const { return static_cast<int>(values.cols()); }
    Vector at_step(int m) const { return values.row(m).transpose(); }

    // 1/2 sum_m dt |v_m|^2, the quadratic control cost.
    double cost() const { return 0.5 * grid.dt() * values.squaredNorm(); }

    // Squared L^2(0,T) norm, i.e. 2 * cost().
    double l2_sq() const { return grid.dt() * values.squaredNorm(); }

    bool in_level_ball(double level) const { return l2_sq() <= level * (1.0 + 1e-12); }

    // Midpoint sampling of a continuous control t -> R^K.
    template <typename F>
    static Control sample(const TimeGrid& g, int modes, F&& fn) {
        Control c(g, modes);
        for (int m = 0; m < g.steps; ++m) {
            const Vector v = fn(g.node(m) + 0.5 * g.dt());
            c.values.row(m) = v.transpose();
        }
        return c;
    }
};

// Time-gridded state path; the discrete stand-in for C([0,T], l2).
struct Trajectory {
    TimeGrid grid;
    LatticeWindow window;
    Eigen::MatrixXd states;  // (steps+1) x site_count, row m = u(t_m)

    Trajectory() = default;
    Trajectory(const TimeGrid& g, const LatticeWindow& w)
        : grid(g), window(w), states(Eigen::MatrixXd::Zero(g.steps + 1, w.site_count())) {}

    State at(int m) const { return State(window, states.row(m).transpose()); }
    void set(int m, const State& s) { states.row(m) = s.values.transpose(); }

    double sup_norm() const {
        double best = 0.0;
        for (int m = 0; m <= grid.steps; ++m) best = std::max(best, states.row(m).norm());
        return best;
    }
    double sup_norm_sq() const {
        const double s = sup_norm();
        return s * s;
    }
};

// max_m ||a(t_m) - b(t_m)||, the C([0,T], l2) distance on the shared grid.
double sup_distance(const Trajectory& a, const Trajectory& b);

void check_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what);

}  // namespace latdev

#endif
