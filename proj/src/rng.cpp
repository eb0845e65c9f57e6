#include "latdev/rng.hpp"

#include <cmath>
#include <numbers>

namespace latdev {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
    const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c[0];
    const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(uint64_t seed, uint64_t c01, uint32_t c2, uint32_t c3) {
    std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(c01), static_cast<uint32_t>(c01 >> 32),
                                   c2, c3};
    uint32_t k0 = static_cast<uint32_t>(seed);
    uint32_t k1 = static_cast<uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

namespace {

inline double to_unit(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    // (0, 1]: never returns 0, safe under log().
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

inline uint32_t pack_slot(uint32_t slot, RngPurpose purpose) {
    return (static_cast<uint32_t>(purpose) << 24) | (slot & 0x00FFFFFFu);
}

}  // namespace

double CounterRng::uniform(uint64_t sample, uint32_t step, uint32_t slot,
                           RngPurpose purpose) const {
    const auto w = Philox4x32::block(seed_, sample, step, pack_slot(slot, purpose));
    return to_unit(w[0], w[1]);
}

void CounterRng::normal_pair(uint64_t sample, uint32_t step, uint32_t pair_slot,
                             RngPurpose purpose, double& z0, double& z1) const {
    const auto w = Philox4x32::block(seed_, sample, step, pack_slot(pair_slot, purpose));
    const double u1 = to_unit(w[0], w[1]);
    const double u2 = to_unit(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
}

void CounterRng::fill_normals(uint64_t sample, uint32_t step, RngPurpose purpose, double* out,
                              int n) const {
    for (int k = 0; k < n; k += 2) {
        double z0, z1;
        normal_pair(sample, step, static_cast<uint32_t>(k / 2), purpose, z0, z1);
        out[k] = z0;
        if (k + 1 < n) out[k + 1] = z1;
    }
}

}  // namespace latdev
