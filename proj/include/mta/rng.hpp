#pragma once

#include <cstdint>
#include <random>

namespace mta {

// SplitMix64 finalizer. Used to derive well-separated child seeds from a
// root seed; stream index k maps to splitmix64(root + (k+1)*GOLDEN).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed-splitting rule: child seed for stream `stream` under `root`.
// Independent workers (replicas, repetitions, per-iteration shot draws)
// each get their own stream index, so execution order never matters.
inline std::uint64_t seed_mix(std::uint64_t root, std::uint64_t stream) {
    return splitmix64(root ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace mta
