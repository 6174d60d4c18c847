#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace icrl {

using Rng = std::mt19937_64;

/// Purpose tags for seed derivation. Streams with different tags never share
/// a seed for the same (id, counter) pair.
enum class StreamTag : std::uint64_t {
    Train = 1,
    Estimate = 2,
    Evaluate = 3,
    Rollout = 4,
    Test = 99,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation: the result depends only on the master seed
/// and the ordered key words, never on call order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t k : keys) {
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t id, std::uint64_t counter) {
    return derive_seed(master, {static_cast<std::uint64_t>(tag), id, counter});
}

/// Uniform double in [0, 1) with 53 random bits; identical on every platform.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(rng()) * n) >> 64);
}

}  // namespace icrl
