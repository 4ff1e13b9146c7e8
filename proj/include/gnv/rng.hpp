#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gnv {

using Engine = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream seed for replication `index` of horizon `slot` under `master`. Independent of the
/// order in which replications are executed.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t slot,
                                         std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(master) ^ slot) ^ index);
}

inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

inline void fill_standard_normal(Engine& engine, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& z : out) {
        z = normal(engine);
    }
}

}  // namespace gnv
