#pragma once

#include <cstdint>

namespace reachset {

/// SplitMix64. Small, portable and fast; every consumer in this library
/// goes through it so that seeded runs are bit-identical across platforms
/// (std::uniform_*_distribution makes no such guarantee).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
    std::uint64_t next_index(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

/// Mixes a stream index into a seed; used for independent per-trail /
/// per-worker substreams that do not depend on iteration order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0x2545f4914f6cdd1dULL * (stream + 1)));
    return g.next_u64();
}

}  // namespace reachset
