#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace isaacs {

// Counter-based normal draws: every variate is a pure function of
// (seed, path, step, component), so results do not depend on evaluation order.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                     std::uint64_t component) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ path);
    h = splitmix64(h ^ (step * 0x100000001B3ULL));
    return splitmix64(h ^ component);
}

/// Uniform in (0, 1), never exactly 0.
constexpr double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                             std::uint64_t component) {
    const double u1 = to_unit_open(counter_hash(seed, path, step, 2 * component));
    const double u2 = to_unit_open(counter_hash(seed, path, step, 2 * component + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace isaacs
