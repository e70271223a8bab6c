#pragma once

// Portable, seed-stable randomness. Standard distributions are avoided because
// their output differs between standard library implementations.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace densify {

/// SplitMix64 finalizer; a good bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of an independent substream keyed by `keys` (e.g. a sample-area row/column).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate (Box-Muller, one value per call).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Sorted positions of a uniformly random `count`-subset of [0, population).
/// Selection sampling: exact size, order preserving, one pass.
std::vector<std::size_t> sample_positions(std::size_t population, std::size_t count, Rng& rng);

}  // namespace densify
