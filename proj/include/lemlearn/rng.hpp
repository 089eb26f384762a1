#pragma once

#include <cstdint>

namespace lemlearn {

/// SplitMix64 generator. Stdlib distributions are implementation-defined, so
/// seeded runs use this to stay reproducible across toolchains.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n).
    uint64_t below(uint64_t n) { return next_u64() % n; }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
};

}  // namespace lemlearn
