#ifndef LATDEV_RNG_HPP
#define LATDEV_RNG_HPP

#include <array>
#include <cstdint>

namespace latdev {

// Philox4x32-10 counter-based generator (Salmon et al. style). Draws are a
// pure function of (seed, counter), so parallel scheduling cannot change any
// stream: sample i, step m, mode k always sees the same numbers.
struct Philox4x32 {
    static std::array<uint32_t, 4> block(uint64_t seed, uint64_t c01, uint32_t c2, uint32_t c3);
};

// Domain separators keep independent uses of the same seed from colliding.
enum class RngPurpose : uint32_t {
    sde_noise = 0,
    control_sampling = 1,
    test_vectors = 2,
};

class CounterRng {
public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t seed() const { return seed_; }

    // Uniform in (0, 1], one per (sample, step, slot, purpose).
    double uniform(uint64_t sample, uint32_t step, uint32_t slot,
                   RngPurpose purpose = RngPurpose::sde_noise) const;

    // Standard normal pair by Box-Muller from one Philox block.
    void normal_pair(uint64_t sample, uint32_t step, uint32_t pair_slot, RngPurpose purpose,
                     double& z0, double& z1) const;

    // Fills `n` standard normals for (sample, step); slot pairing is internal.
    void fill_normals(uint64_t sample, uint32_t step, RngPurpose purpose, double* out,
                      int n) const;

private:
    uint64_t seed_;
};

}  // namespace latdev

#endif
