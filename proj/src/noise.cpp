#include "stochcirc/noise.hpp"

#include "stochcirc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace stochcirc {

NoiseStream::NoiseStream(std::uint64_t seed, double dt) : seed_(seed), dt_(dt), sqrt_dt_(std::sqrt(dt)) {
    if (!(dt > 0.0)) throw std::invalid_argument("noise step must be positive");
}

double NoiseStream::increment(std::uint64_t path, std::size_t channel, std::size_t step) const noexcept {
    return sqrt_dt_ * standard_normal(seed_, path, static_cast<std::uint32_t>(channel), static_cast<std::uint32_t>(step));
}

void NoiseStream::increments(std::uint64_t path, std::size_t step, std::span<double> out) const noexcept {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = increment(path, c, step);
}

NoisePath NoisePath::generate(std::uint64_t seed, std::uint64_t path, std::size_t channels, std::size_t steps,
                              double dt) {
    const NoiseStream stream(seed, dt);
    NoisePath out;
    out.data_.resize(channels * steps);
    out.channels_ = channels;
    out.dt_ = dt;
    out.seed_ = seed;
    out.path_ = path;
    for (std::size_t k = 0; k < steps; ++k) {
        stream.increments(path, k, std::span<double>(out.data_).subspan(k * channels, channels));
    }
    return out;
}

NoisePath NoisePath::from_increments(std::vector<double> increments, std::size_t channels, double dt) {
    if (channels == 0 || increments.size() % channels != 0) {
        throw std::invalid_argument("increment count must be a multiple of the channel count");
    }
    NoisePath out;
    out.data_ = std::move(increments);
    out.channels_ = channels;
    out.dt_ = dt;
    return out;
}

double NoisePath::value(std::size_t channel, std::size_t step) const {
    double w = 0.0;
    for (std::size_t k = 0; k < step; ++k) w += increment(channel, k);
    return w;
}

NoisePath NoisePath::coarsened(std::size_t factor) const {
    if (factor == 0 || steps() % factor != 0) throw std::invalid_argument("coarsening factor must divide the step count");
    NoisePath out = *this;
    const std::size_t n = steps() / factor;
    out.data_.assign(n * channels_, 0.0);
    out.dt_ = dt_ * static_cast<double>(factor);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < factor; ++j)
            for (std::size_t c = 0; c < channels_; ++c) out.data_[k * channels_ + c] += data_[(k * factor + j) * channels_ + c];
    return out;
}

}  // namespace stochcirc
