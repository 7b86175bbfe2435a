#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace trajbench {

using Rng = std::mt19937_64;

/// splitmix64 finalizer over (seed, stream). Used to give every round,
/// trajectory or config its own reproducible RNG stream, independent of the
/// order in which streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

/// `count` distinct indices drawn uniformly from [0, population) with
/// Floyd's algorithm. Expected O(count) work regardless of population size.
inline std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t population,
                                                             std::uint64_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::uint64_t capacity = 16;
    while (capacity < 2 * count) capacity <<= 1;
    constexpr std::uint64_t empty = ~std::uint64_t{0};
    std::vector<std::uint64_t> table(capacity, empty);
    auto insert = [&](std::uint64_t v) {
        std::uint64_t slot = (v * 0x9e3779b97f4a7c15ULL) & (capacity - 1);
        while (table[slot] != empty) {
            if (table[slot] == v) return false;
            slot = (slot + 1) & (capacity - 1);
        }
        table[slot] = v;
        return true;
    };
    for (std::uint64_t j = population - count; j < population; ++j) {
        const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        const std::uint64_t pick = insert(t) ? t : j;
        if (pick == j) insert(j);
        out.push_back(pick);
    }
    return out;
}

} // namespace trajbench
