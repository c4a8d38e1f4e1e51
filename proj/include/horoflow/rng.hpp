#pragma once

// Seeded RNG with an explicit uniform mapping. std::uniform_real_distribution
// is implementation-defined, which would break byte-identical reruns across
// toolchains; the (x >> 11) * 2^-53 mapping is pinned instead.

#include <cstdint>
#include <random>

namespace horoflow {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi] by rejection-free scaling (bias negligible
    /// for the tiny ranges used here, and fully deterministic).
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform01() * (hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace horoflow
