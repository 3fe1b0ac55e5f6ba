#pragma once

#include <cstdint>

namespace altersim {

// SplitMix64. All seeded randomness in the simulator flows through this
// generator so that traces are reproducible bit-for-bit across platforms;
// the standard <random> distributions make no such guarantee.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double next_u01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + next_u01() * (hi - lo);
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return n == 0 ? 0 : next_u64() % n;
    }

private:
    std::uint64_t state_;
};

// Stateless per-key stream derivation: mixes a base seed with a key so that
// independent consumers (per tick, per trial, per group) draw from disjoint
// deterministic streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t z = base ^ (key * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return z ^ (z >> 33);
}

} // namespace altersim
