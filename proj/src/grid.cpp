#include "latdev/grid.hpp"

namespace latdev {

double sup_distance(const Trajectory& a, const Trajectory& b) {
    check_same_grid(a.grid, b.grid, "sup_distance");
    if (a.window != b.window) throw DimensionMismatch("sup_distance: window mismatch");
    double best = 0.0;
    for (int m = 0; m <= a.grid.steps; ++m)
        best = std::max(best, (a.states.row(m) - b.states.row(m)).norm());
    return best;
}

void check_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
    if (a != b) throw DimensionMismatch(std::string(what) + ": time grid mismatch");
}

}  // namespace latdev
