#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace motionforge {

// Deterministic draw helpers. std::uniform_*_distribution and std::shuffle
// are implementation-defined across standard libraries, so every random
// draw in this project goes through the routines below; results are then
// reproducible for a fixed seed on any platform.

using Rng = std::mt19937_64;

/// splitmix64 mix step, used to derive independent per-item seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1), 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
inline double uniform01_open_low(Rng& rng) {
    return 1.0 - uniform01(rng);
}

/// Uniform double in [lo, hi).
inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

/// Uniform integer in [0, n), rejection-sampled so all values are equally likely.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

/// Random sign, +1 or -1.
inline double uniform_sign(Rng& rng) {
    return (rng() & 1u) ? 1.0 : -1.0;
}

/// Fisher-Yates shuffle with explicit draws (stable across platforms).
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace motionforge
