#pragma once

#include <cstdint>

namespace connectgraph {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based hash of (seed, a, b). Stateless, so draws keyed on it do not
/// depend on evaluation order.
constexpr std::uint64_t keyed_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(mix64(mix64(seed) ^ a) ^ (b + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits of a hash.
constexpr double unit_uniform(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return unit_uniform(keyed_hash(seed, a, b));
}

/// Seed for trial `trial` at grid point `point` of a sweep.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point,
                                    std::uint64_t trial) noexcept {
    return keyed_hash(base ^ 0x5EEDULL, point, trial);
}

}  // namespace connectgraph
