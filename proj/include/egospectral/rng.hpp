#pragma once

#include <cstdint>
#include <random>

namespace egospectral {

// mt19937_64 output is pinned bit-for-bit by the standard; the std
// distributions are not, so map raw draws to doubles/ranges by hand to keep
// generated graphs identical across platforms and library versions.

/// Uniform double in [0, 1) with 53 random bits.
inline double rng_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound); rejection sampling, bound > 0.
inline std::uint64_t rng_below(std::mt19937_64& g, std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % bound;
}

}  // namespace egospectral
