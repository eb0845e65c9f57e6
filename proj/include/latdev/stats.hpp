#ifndef LATDEV_STATS_HPP
#define LATDEV_STATS_HPP

#include <functional>
#include <vector>

namespace latdev {

struct MeanCI {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double std_error = 0.0;
    long n = 0;
};

// Sample mean with a 95% normal-approximation interval.
MeanCI mean_ci(const std::vector<double>& samples);

// Binomial proportion with 95% interval: normal approximation, switching to
// exact Clopper-Pearson when fewer than 10 hits (or misses) were observed.
struct ProportionCI {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long hits = 0;
    long n = 0;
    bool zero_hits = false;
    bool exact = false;
};
ProportionCI proportion_ci(long hits, long n);

// log( (1/n) sum exp(x_i) ) without overflow/underflow.
double log_mean_exp(const std::vector<double>& x);

// Standard normal upper tail Q(z) = P(Z >= z) and its log, stable far out.
double gaussian_tail(double z);
double log_gaussian_tail(double z);

// Deterministic static-chunk parallel map: out[i] = fn(i), i in [0, n).
// Chunking never affects values, only wall time.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace latdev

#endif
