#include "latdev/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "latdev/errors.hpp"

namespace latdev {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

MeanCI mean_ci(const std::vector<double>& samples) {
    if (samples.empty()) throw Error("mean_ci: empty sample set");
    MeanCI out;
    out.n = static_cast<long>(samples.size());
    double acc = 0.0;
    for (double x : samples) acc += x;
    out.mean = acc / out.n;
    double var = 0.0;
    for (double x : samples) var += (x - out.mean) * (x - out.mean);
    var = out.n > 1 ? var / (out.n - 1) : 0.0;
    out.std_error = std::sqrt(var / out.n);
    out.ci_low = out.mean - kZ95 * out.std_error;
    out.ci_high = out.mean + kZ95 * out.std_error;
    return out;
}

namespace {

// log P(X <= k) for X ~ Binomial(n, p), k small; summed in log space.
double log_binom_cdf(long k, long n, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return k >= n ? 0.0 : -std::numeric_limits<double>::infinity();
    const double lp = std::log(p), lq = std::log1p(-p);
    double log_term = n * lq;  // j = 0
    double log_sum = log_term;
    for (long j = 1; j <= k; ++j) {
        log_term += std::log(static_cast<double>(n - j + 1) / j) + lp - lq;
        log_sum = std::max(log_sum, log_term) +
                  std::log1p(std::exp(std::min(log_sum, log_term) -
                                      std::max(log_sum, log_term)));
    }
    return log_sum;
}

double solve_binom(long k, long n, double target_log, bool upper) {
    // Monotone in p: CDF decreases as p grows.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = log_binom_cdf(upper ? k : k - 1, n, mid);
        if (v > target_log)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ProportionCI proportion_ci(long hits, long n) {
    if (n < 1) throw Error("proportion_ci: n must be >= 1");
    ProportionCI out;
    out.hits = hits;
    out.n = n;
    out.p_hat = static_cast<double>(hits) / n;
    out.zero_hits = hits == 0;
    const long misses = n - hits;
    if (hits >= 10 && misses >= 10) {
        const double se = std::sqrt(out.p_hat * (1.0 - out.p_hat) / n);
        out.ci_low = std::max(0.0, out.p_hat - kZ95 * se);
        out.ci_high = std::min(1.0, out.p_hat + kZ95 * se);
        return out;
    }
    out.exact = true;
    const double a2 = std::log(0.025);
    out.ci_low = hits == 0 ? 0.0 : solve_binom(hits, n, std::log1p(-0.025), false);
    out.ci_high = hits == n ? 1.0 : solve_binom(hits, n, a2, true);
    return out;
}

double log_mean_exp(const std::vector<double>& x) {
    if (x.empty()) throw Error("log_mean_exp: empty sample set");
    double mx = x[0];
    for (double v : x) mx = std::max(mx, v);
    double acc = 0.0;
    for (double v : x) acc += std::exp(v - mx);
    return mx + std::log(acc / x.size());
}

double gaussian_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double log_gaussian_tail(double z) {
    if (z < 30.0) return std::log(gaussian_tail(z));
    // Asymptotic expansion of Mills' ratio beyond erfc underflow territory.
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(z * std::sqrt(2.0 * std::numbers::pi)) + std::log(series);
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + threads - 1) / threads;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t) {
        const long lo = t * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &first_error, &err_mutex] {
            try {
                for (long i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace latdev
