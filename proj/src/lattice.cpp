#include "latdev/lattice.hpp"

#include <cmath>
#include <string>

namespace latdev {

LatticeWindow::LatticeWindow(int dim, int radius) : dim_(dim), radius_(radius) {
    if (dim < 1) throw DimensionMismatch("lattice dim must be >= 1");
    if (radius < 0) throw DimensionMismatch("lattice radius must be >= 0");
    site_count_ = 1;
    for (int d = 0; d < dim; ++d) site_count_ *= side();
    edge_count_ = (2L * radius + 2) * (site_count_ / side());
    strides_.assign(dim, 1);
    for (int d = dim - 2; d >= 0; --d) strides_[d] = strides_[d + 1] * side();
}

long LatticeWindow::flat_index(const std::vector<int>& multi) const {
    if (static_cast<int>(multi.size()) != dim_)
        throw DimensionMismatch("multi-index has wrong dimension");
    long flat = 0;
    for (int d = 0; d < dim_; ++d) {
        if (multi[d] < -radius_ || multi[d] > radius_)
            throw DimensionMismatch("site " + std::to_string(multi[d]) +
                                    " outside window of radius " + std::to_string(radius_));
        flat += (multi[d] + radius_) * strides_[d];
    }
    return flat;
}

std::vector<int> LatticeWindow::multi_index(long flat) const {
    std::vector<int> multi(dim_);
    for (int d = 0; d < dim_; ++d) {
        multi[d] = static_cast<int>(flat / strides_[d]) % side() - radius_;
    }
    return multi;
}

long LatticeWindow::neighbor(long flat, int direction, int sign) const {
    const int d = direction - 1;
    const int coord = static_cast<int>(flat / strides_[d]) % side();
    const int next = coord + sign;
    if (next < 0 || next >= side()) return -1;
    return flat + sign * strides_[d];
}

State::State(const LatticeWindow& w, Vector v) : window(w), values(std::move(v)) {
    if (values.size() != w.site_count())
        throw DimensionMismatch("state length does not match window site count");
}

State State::zero(const LatticeWindow& w) { return State(w, Vector::Zero(w.site_count())); }

State State::unit(const LatticeWindow& w, const std::vector<int>& site) {
    State s = zero(w);
    s.values[w.flat_index(site)] = 1.0;
    return s;
}

void check_same_window(const State& a, const State& b, const char* what) {
    if (a.window != b.window)
        throw DimensionMismatch(std::string(what) + ": window mismatch between operands");
}

void apply_A_into(const State& u, State& out) {
    const LatticeWindow& w = u.window;
    const int N = w.dim();
    for (long i = 0; i < w.site_count(); ++i) {
        double acc = 2.0 * N * u.values[i];
        for (int j = 1; j <= N; ++j) {
            const long lo = w.neighbor(i, j, -1);
            const long hi = w.neighbor(i, j, +1);
            if (lo >= 0) acc -= u.values[lo];
            if (hi >= 0) acc -= u.values[hi];
        }
        out.values[i] = acc;
    }
}

State apply_A(const State& u) {
    State out = State::zero(u.window);
    apply_A_into(u, out);
    return out;
}

namespace {

void check_direction(const LatticeWindow& w, int direction) {
    if (direction < 1 || direction > w.dim())
        throw DimensionMismatch("direction " + std::to_string(direction) +
                                " out of range 1.." + std::to_string(w.dim()));
}

// Edge index layout for direction j: row-major over (i_1,..,i_N) where the
// j-th coordinate runs over {-m-1..m} (2m+2 values) and the others over
// {-m..m}. Edge (i, i+e_j) is keyed by its lower endpoint i.
long edge_flat(const LatticeWindow& w, int direction, long site_flat, int offset) {
    const int d = direction - 1;
    const int side = w.side();
    long below = site_flat % w.strides()[d];                 // faster axes
    long above = site_flat / (w.strides()[d] * side);        // slower axes
    long coord = (site_flat / w.strides()[d]) % side;        // 0..2m along axis d
    return (above * (side + 1) + coord + offset) * w.strides()[d] + below;
}

}  // namespace

EdgeField apply_B(int direction, const State& u) {
    const LatticeWindow& w = u.window;
    check_direction(w, direction);
    EdgeField e{w, direction, Vector::Zero(w.edge_count())};
    for (long i = 0; i < w.site_count(); ++i) {
        const double ui = u.values[i];
        // Edge whose lower endpoint is i: contributes -u_i (and +u_{i+e_j} if inside).
        e.values[edge_flat(w, direction, i, 1)] -= ui;
        // Edge whose upper endpoint is i: contributes +u_i.
        e.values[edge_flat(w, direction, i, 0)] += ui;
    }
    return e;
}

State apply_B_star(int direction, const EdgeField& e) {
    const LatticeWindow& w = e.window;
    check_direction(w, direction);
    if (direction != e.direction)
        throw DimensionMismatch("edge field belongs to a different direction");
    if (e.values.size() != w.edge_count())
        throw DimensionMismatch("edge field length does not match window edge count");
    State out = State::zero(w);
    for (long i = 0; i < w.site_count(); ++i) {
        // Transpose of apply_B: (B* w)_i = w_{edge below i} - w_{edge above i}.
        out.values[i] = e.values[edge_flat(w, direction, i, 0)] -
                        e.values[edge_flat(w, direction, i, 1)];
    }
    return out;
}

double dirichlet_energy(const State& u) {
    double acc = 0.0;
    for (int j = 1; j <= u.window.dim(); ++j) acc += apply_B(j, u).values.squaredNorm();
    return acc;
}

double tail_mass(const State& u, int inner_radius) {
    const LatticeWindow& w = u.window;
    double acc = 0.0;
    for (long i = 0; i < w.site_count(); ++i) {
        const std::vector<int> multi = w.multi_index(i);
        int max_abs = 0;
        for (int c : multi) max_abs = std::max(max_abs, std::abs(c));
        if (max_abs > inner_radius) acc += u.values[i] * u.values[i];
    }
    return acc;
}

}  // namespace latdev
