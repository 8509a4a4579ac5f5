#pragma once

#include <cstdint>

namespace rrr {

// Portable deterministic PRNG (splitmix64, Steele/Lea/Flood mixing constants).
// Instance generation must be bit-identical across platforms, so we pin the
// algorithm instead of using std::mt19937 whose distributions are not portable.
// Reference vectors for seed 0 are frozen in the test suite.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [lo, hi] via rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit span
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % range);
    }

    // Derive an independent stream for (seed, a, b), used to key instances by
    // (base seed, sweep value, replication) without correlating streams.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        SplitMix64 g(seed);
        std::uint64_t h = g.next() ^ (a + 0x9E3779B97F4A7C15ULL);
        SplitMix64 g2(h);
        return g2.next() ^ (b + 0xBF58476D1CE4E5B9ULL);
    }

private:
    std::uint64_t state_;
};

}  // namespace rrr
