#pragma once

#include <cstdint>
#include <random>
#include <span>

// Seeded draws built directly on mt19937_64 output, so results do not depend
// on the standard library's distribution implementations.
namespace bayesclean::detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// n must be > 0; modulo bias is irrelevant at these ranges
inline std::size_t draw_index(std::mt19937_64& g, std::size_t n) {
    return static_cast<std::size_t>(g() % n);
}

inline double draw_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline std::size_t draw_weighted(std::mt19937_64& g, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = draw_unit(g) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace bayesclean::detail
