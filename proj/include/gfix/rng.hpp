#pragma once

#include <cstdint>
#include <random>

namespace gfix {

/// Engine for one independent work unit (a sampled tuple, a hunt instance).
/// Seeding from (master, stream) keeps results independent of evaluation order.
inline std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform integer in [lo, hi] without relying on std distribution internals.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
    const std::uint64_t span = hi - lo + 1;
    if (span == 0)
        return rng();
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t draw = rng();
    while (draw >= limit)
        draw = rng();
    return lo + draw % span;
}

/// Bernoulli draw with probability num/den.
inline bool coin(std::mt19937_64& rng, std::uint64_t num, std::uint64_t den)
{
    return uniform_index(rng, 0, den - 1) < num;
}

}  // namespace gfix
