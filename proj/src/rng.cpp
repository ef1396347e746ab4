#include "stochcirc/rng.hpp"

#include <cmath>
#include <numbers>

namespace stochcirc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t path, std::uint32_t channel,
                                   std::uint32_t step) noexcept {
    return philox4x32({static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32), channel, step},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

// 53-bit uniform in (0, 1].
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t channel, std::uint32_t step) noexcept {
    const auto r = block(seed, path, channel, step);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_open(std::uint64_t seed, std::uint64_t path, std::uint32_t channel, std::uint32_t step) noexcept {
    const auto r = block(seed, path, channel, step);
    // (0, 1]: flip to [0, 1) then nudge away from 0.
    const double u = to_unit(r[0], r[1]);
    return u < 1.0 ? u : 1.0 - 0x1.0p-53;
}

}  // namespace stochcirc
