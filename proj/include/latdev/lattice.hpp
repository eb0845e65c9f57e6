#ifndef LATDEV_LATTICE_HPP
#define LATDEV_LATTICE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "latdev/errors.hpp"

namespace latdev {

using Vector = Eigen::VectorXd;

// Truncated integer lattice {-m..m}^N with zero Dirichlet padding outside.
// Flat indexing is row-major over (i_1,...,i_N), i_N fastest.
class LatticeWindow {
public:
    LatticeWindow() = default;
    LatticeWindow(int dim, int radius);

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }
    long site_count() const { return site_count_; }

    // Edges in direction j connect site i to site i+e_j for i_j in {-m-1..m};
    // both boundary edges are kept so that A = sum_j B_j* B_j holds exactly.
    long edge_count() const { return edge_count_; }

    long flat_index(const std::vector<int>& multi) const;
    std::vector<int> multi_index(long flat) const;

    // Flat index of the stencil neighbor i +/- e_j, or -1 outside the window.
    long neighbor(long flat, int direction, int sign) const;

    bool operator==(const LatticeWindow& o) const {
        return dim_ == o.dim_ && radius_ == o.radius_;
    }
    bool operator!=(const LatticeWindow& o) const { return !(*this == o); }

    const std::vector<long>& strides() const { return strides_; }

private:
    int dim_ = 1;
    int radius_ = 0;
    long site_count_ = 1;
    long edge_count_ = 2;
    std::vector<long> strides_;
};

struct State {
    LatticeWindow window;
    Vector values;

    State() = default;
    State(const LatticeWindow& w, Vector v);
    static State zero(const LatticeWindow& w);
    static State unit(const LatticeWindow& w, const std::vector<int>& site);

    double norm() const { return values.norm(); }
    double squared_norm() const { return values.squaredNorm(); }
};

// Per-direction edge field, the image space of B_j.
struct EdgeField {
    LatticeWindow window;
    int direction = 0;  // 1-based, matches the lattice axis
    Vector values;
};

void check_same_window(const State& a, const State& b, const char* what);

// Negative discrete Laplacian: (Au)_i = 2N u_i - sum_j (u_{i+e_j} + u_{i-e_j}).
State apply_A(const State& u);
void apply_A_into(const State& u, State& out);  // allocation-free hot path

// Forward difference along direction j onto the edge set (zero padding outside).
EdgeField apply_B(int direction, const State& u);

// Exact adjoint of apply_B: (B_j u, w)_edges = (u, B_j* w)_sites.
State apply_B_star(int direction, const EdgeField& w);

// sum_j ||B_j u||^2; equals (Au, u) and is >= 0.
double dirichlet_energy(const State& u);

// Mass outside the centered sub-window of radius `inner_radius` (max-norm),
// i.e. sum of u_i^2 over sites with |i|_inf > inner_radius.
double tail_mass(const State& u, int inner_radius);

}  // namespace latdev

#endif
