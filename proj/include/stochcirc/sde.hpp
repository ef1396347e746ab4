#pragma once

// Two-dimensional SDEs with several noise channels,
//
//     dx = w(t, x) dt + sum_a sigma_a(x) o dB^a      (Stratonovich)
//     dx = v(t, x) dt + sum_a sigma_a(x)   dB^a      (Ito)
//     v  = w + 1/2 sum_a (D sigma_a) sigma_a
//
// and the fixed-step schemes that advance them.

#include "stochcirc/noise.hpp"
#include "stochcirc/phase_function.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace stochcirc {

struct DiffusionChannel {
    ChannelInfo info;
    VectorField field;
};

class SdeSystem {
public:
    SdeSystem() = default;

    static SdeSystem from_stratonovich(VectorField w, std::vector<DiffusionChannel> channels,
                                       std::vector<SymplecticPair> pairs = {});
    static SdeSystem from_ito(VectorField v, std::vector<DiffusionChannel> channels,
                              std::vector<SymplecticPair> pairs = {});

    [[nodiscard]] const VectorField& ito_drift() const noexcept { return ito_; }
    [[nodiscard]] const VectorField& stratonovich_drift() const noexcept { return strat_; }
    [[nodiscard]] const std::vector<DiffusionChannel>& channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t channel_count() const noexcept { return channels_.size(); }
    [[nodiscard]] const std::vector<SymplecticPair>& pairs() const noexcept { return pairs_; }
    [[nodiscard]] std::vector<ChannelInfo> channel_info() const;

    /// Sum over channels of sigma^q sigma^p: the instantaneous dq dp covariation rate.
    [[nodiscard]] double covariation_rate(double t, const Vec2& x) const;

private:
    VectorField ito_;
    VectorField strat_;
    std::vector<DiffusionChannel> channels_;
    std::vector<SymplecticPair> pairs_;
};

/// 1/2 sum_a (D sigma_a) sigma_a; analytic when every field is analytic and the
/// products stay in the separable class.
VectorField ito_correction(const std::vector<VectorField>& sigma);

/// v = w + ito_correction(sigma).
VectorField strat_to_ito(const VectorField& w, const std::vector<VectorField>& sigma);

enum class Scheme {
    euler_maruyama,     // Ito form
    heun,               // Stratonovich predictor-corrector
    rk4_stratonovich,   // classical RK4 on the frozen-increment field
};

[[nodiscard]] bool is_stratonovich(Scheme scheme) noexcept;
[[nodiscard]] const char* to_string(Scheme scheme) noexcept;
/// Parses "euler_maruyama"/"em", "heun", "rk4"; throws std::invalid_argument.
[[nodiscard]] Scheme parse_scheme(std::string_view name);

/// x + v dt + sum sigma_a dW_a. Throws IntegrationError on a non-finite result.
Vec2 euler_maruyama_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                         std::size_t step_index = 0);

/// Predictor x~ = x + w dt + sum sigma dW; corrector averages drift and diffusion at x and x~.
Vec2 heun_stratonovich_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                            std::size_t step_index = 0);

/// RK4 applied to the field X(s, y) = w(s, y) dt + sum sigma_a(y) dW_a over one unit of pseudo-time.
Vec2 rk4_stratonovich_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                           std::size_t step_index = 0);

Vec2 step(Scheme scheme, const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
          std::size_t step_index = 0);

/// One step together with its exact derivatives: d x'/d x and d x'/d dW_a.
struct LinearizedStep {
    Vec2 next;
    Mat2 jacobian;
    std::vector<Vec2> sensitivities;
};

LinearizedStep linearized_step(Scheme scheme, const SdeSystem& system, const Vec2& x, double t, double dt,
                               std::span<const double> dw, std::size_t step_index = 0);

/// Integrates one path over the full length of `noise`, returning every state (steps + 1 entries).
std::vector<Vec2> integrate_path(Scheme scheme, const SdeSystem& system, const Vec2& x0, double t0,
                                 const NoisePath& noise);

}  // namespace stochcirc
