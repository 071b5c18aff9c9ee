#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nnids {

// All shuffling in this project goes through these two helpers so that fold
// assignments and subsamples are reproducible bit-for-bit across platforms.
// std::mt19937_64 output is fixed by the standard; the distributions below
// are written out by hand because the std:: distribution objects are not.

/// Unbiased draw from [0, bound) via rejection sampling. bound must be > 0.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t value;
    do {
        value = rng();
    } while (value >= limit);
    return value % bound;
}

/// Fisher-Yates shuffle using bounded_uint for the index draws.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace nnids
