#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace beran {

using Rng = std::mt19937_64;

/// Independent generator for the stream addressed by (seed, path...). The
/// same address always yields the same sequence, whatever thread uses it.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Child seed for hierarchical stream layouts (sample j -> replicate k).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Uniform deviate on the open interval (0, 1), 53-bit resolution.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace beran
