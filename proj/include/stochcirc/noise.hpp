#pragma once

// Brownian increments for multi-channel SDEs.
//
// Symplectic pairs (Q_j, P_j) are sampled exactly like independent channels;
// their bracket weight Gamma is metadata read only by the bracket checks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stochcirc {

enum class ChannelKind { plain, symplectic_q, symplectic_p };

struct ChannelInfo {
    std::string label;
    ChannelKind kind = ChannelKind::plain;
};

/// A (Q, P) pair of channel indices with bracket weight Gamma: {Q(t), P(s)} = Gamma min(t, s).
struct SymplecticPair {
    std::size_t q_channel = 0;
    std::size_t p_channel = 0;
    double gamma = 1.0;
};

/// Addressable increments sqrt(dt) * N(0, 1) keyed by (seed, path, channel, step).
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, double dt);

    [[nodiscard]] double increment(std::uint64_t path, std::size_t channel, std::size_t step) const noexcept;
    /// Fills out[c] for every channel c at the given step.
    void increments(std::uint64_t path, std::size_t step, std::span<double> out) const noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }

private:
    std::uint64_t seed_;
    double dt_;
    double sqrt_dt_;
};

/// One materialized sample path, stored step-major.
class NoisePath {
public:
    NoisePath() = default;
    static NoisePath generate(std::uint64_t seed, std::uint64_t path, std::size_t channels, std::size_t steps,
                              double dt);
    /// Wraps explicit increments (size steps * channels, step-major).
    static NoisePath from_increments(std::vector<double> increments, std::size_t channels, double dt);

    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t steps() const noexcept { return channels_ ? data_.size() / channels_ : 0; }
    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] double increment(std::size_t channel, std::size_t step) const { return data_.at(step * channels_ + channel); }
    [[nodiscard]] std::span<const double> at_step(std::size_t step) const {
        return std::span<const double>(data_).subspan(step * channels_, channels_);
    }
    /// Brownian value W(k dt) of one channel, W(0) = 0.
    [[nodiscard]] double value(std::size_t channel, std::size_t step) const;

    /// Same path on a grid `factor` times coarser (increments summed). Requires factor | steps.
    [[nodiscard]] NoisePath coarsened(std::size_t factor) const;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t path_index() const noexcept { return path_; }

private:
    std::vector<double> data_;
    std::size_t channels_ = 0;
    double dt_ = 0.0;
    std::uint64_t seed_ = 0;
    std::uint64_t path_ = 0;
};

}  // namespace stochcirc
