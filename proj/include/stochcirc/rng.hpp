#pragma once

// Counter-based Gaussian stream. Any increment is addressable by
// (seed, path, channel, step) without generating its predecessors.

#include <array>
#include <cstdint>

namespace stochcirc {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

/// Standard normal variate for the given address (Box-Muller on one Philox block).
double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t channel, std::uint32_t step) noexcept;

/// Uniform variate in (0, 1) for the given address.
double uniform_open(std::uint64_t seed, std::uint64_t path, std::uint32_t channel, std::uint32_t step) noexcept;

}  // namespace stochcirc
