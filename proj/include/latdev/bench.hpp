#ifndef LATDEV_BENCH_HPP
#define LATDEV_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace latdev::bench {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct BenchOptions {
    uint64_t seed = 20260808;
    int threads = 2;
    bool verbose = true;       // print one line per criterion as it finishes
    bool self_test = false;    // corrupt one tolerance so exactly one criterion fails
};

// Full verification battery: operator identities, structural conditions,
// skeleton correctness, weak-convergence decay, gradient exactness, rate
// oracle agreement, the endpoint/LDP/Laplace values on the linear benchmark,
// controlled-SDE convergence, uniform moments, and determinism. Tolerances
// are pinned here, in code.
std::vector<CriterionResult> run_acceptance(const BenchOptions& options);

// (criterion, pass/fail) table as deterministic CSV text.
std::string summary_csv(const std::vector<CriterionResult>& results);

}  // namespace latdev::bench

#endif
