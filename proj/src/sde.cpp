#include "stochcirc/sde.hpp"

#include "stochcirc/errors.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace stochcirc {

namespace {

std::vector<VectorField> fields_of(const std::vector<DiffusionChannel>& channels) {
    std::vector<VectorField> out;
    out.reserve(channels.size());
    for (const auto& c : channels) out.push_back(c.field);
    return out;
}

void check_finite(const Vec2& x, std::size_t step_index) {
    if (!std::isfinite(x(0)) || !std::isfinite(x(1))) throw IntegrationError("non-finite state", step_index);
}

void check_channels(const SdeSystem& system, std::span<const double> dw) {
    if (dw.size() != system.channel_count()) throw std::invalid_argument("increment count does not match channel count");
}

// Butcher tableaux for the frozen-increment field.
struct Tableau {
    int stages;
    std::array<std::array<double, 4>, 4> a;
    std::array<double, 4> b;
    std::array<double, 4> c;
};

constexpr Tableau kHeun{2, {{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}}, {0.5, 0.5, 0, 0}, {0, 1, 0, 0}};
constexpr Tableau kRk4{4,
                       {{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1, 0}}},
                       {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6},
                       {0, 0.5, 0.5, 1}};

template <bool Linearize>
LinearizedStep frozen_field_rk(const Tableau& tab, const SdeSystem& system, const Vec2& x, double t, double dt,
                               std::span<const double> dw, std::size_t step_index) {
    const std::size_t m = system.channel_count();
    std::array<Vec2, 4> k;
    std::array<Mat2, 4> dk_dx;
    std::array<std::vector<Vec2>, 4> dk_dw;
    LinearizedStep out;
    for (int i = 0; i < tab.stages; ++i) {
        Vec2 y = x;
        for (int j = 0; j < i; ++j) y += tab.a[i][j] * k[j];
        const double s = t + tab.c[i] * dt;
        k[i] = system.stratonovich_drift()(s, y) * dt;
        for (std::size_t a = 0; a < m; ++a) k[i] += system.channels()[a].field(s, y) * dw[a];
        if constexpr (Linearize) {
            Mat2 dx_field = system.stratonovich_drift().jacobian(s, y) * dt;
            for (std::size_t a = 0; a < m; ++a) dx_field += system.channels()[a].field.jacobian(s, y) * dw[a];
            Mat2 dy_dx = Mat2::Identity();
            for (int j = 0; j < i; ++j) dy_dx += tab.a[i][j] * dk_dx[j];
            dk_dx[i] = dx_field * dy_dx;
            dk_dw[i].resize(m);
            for (std::size_t a = 0; a < m; ++a) {
                Vec2 dy_dw = Vec2::Zero();
                for (int j = 0; j < i; ++j) dy_dw += tab.a[i][j] * dk_dw[j][a];
                dk_dw[i][a] = dx_field * dy_dw + system.channels()[a].field(s, y);
            }
        }
    }
    out.next = x;
    for (int i = 0; i < tab.stages; ++i) out.next += tab.b[i] * k[i];
    check_finite(out.next, step_index);
    if constexpr (Linearize) {
        out.jacobian = Mat2::Identity();
        for (int i = 0; i < tab.stages; ++i) out.jacobian += tab.b[i] * dk_dx[i];
        out.sensitivities.assign(m, Vec2::Zero());
        for (std::size_t a = 0; a < m; ++a)
            for (int i = 0; i < tab.stages; ++i) out.sensitivities[a] += tab.b[i] * dk_dw[i][a];
        if (!out.jacobian.allFinite()) throw IntegrationError("non-finite Jacobian", step_index);
    }
    return out;
}

}  // namespace

SdeSystem SdeSystem::from_stratonovich(VectorField w, std::vector<DiffusionChannel> channels,
                                       std::vector<SymplecticPair> pairs) {
    SdeSystem s;
    s.ito_ = strat_to_ito(w, fields_of(channels));
    s.strat_ = std::move(w);
    s.channels_ = std::move(channels);
    s.pairs_ = std::move(pairs);
    return s;
}

SdeSystem SdeSystem::from_ito(VectorField v, std::vector<DiffusionChannel> channels, std::vector<SymplecticPair> pairs) {
    SdeSystem s;
    s.strat_ = v + ito_correction(fields_of(channels)).scaled(-1.0);
    s.ito_ = std::move(v);
    s.channels_ = std::move(channels);
    s.pairs_ = std::move(pairs);
    return s;
}

std::vector<ChannelInfo> SdeSystem::channel_info() const {
    std::vector<ChannelInfo> out;
    for (const auto& c : channels_) out.push_back(c.info);
    return out;
}

double SdeSystem::covariation_rate(double t, const Vec2& x) const {
    double acc = 0.0;
    for (const auto& c : channels_) {
        const Vec2 s = c.field(t, x);
        acc += s(0) * s(1);
    }
    return acc;
}

VectorField ito_correction(const std::vector<VectorField>& sigma) {
    bool analytic = true;
    for (const auto& s : sigma) analytic = analytic && s.is_analytic();
    if (analytic) {
        try {
            PhaseFunction cq, cp;
            for (const auto& s : sigma) {
                const PhaseFunction& sq = s.q_component();
                const PhaseFunction& sp = s.p_component();
                cq = cq + sq * sq.dq() + sp * sq.dp();
                cp = cp + sq * sp.dq() + sp * sp.dp();
            }
            return VectorField::analytic(cq.scaled(0.5), cp.scaled(0.5));
        } catch (const NotRepresentableError&) {
            // Fall through to the pointwise form.
        }
    }
    return VectorField::callable([sigma](double t, const Vec2& x) -> Vec2 {
        Vec2 c = Vec2::Zero();
        for (const auto& s : sigma) c += s.jacobian(t, x) * s(t, x);
        return 0.5 * c;
    });
}

VectorField strat_to_ito(const VectorField& w, const std::vector<VectorField>& sigma) {
    return w + ito_correction(sigma);
}

bool is_stratonovich(Scheme scheme) noexcept { return scheme != Scheme::euler_maruyama; }

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::euler_maruyama: return "euler_maruyama";
        case Scheme::heun: return "heun";
        case Scheme::rk4_stratonovich: return "rk4";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "euler_maruyama" || name == "em") return Scheme::euler_maruyama;
    if (name == "heun") return Scheme::heun;
    if (name == "rk4" || name == "rk4_stratonovich") return Scheme::rk4_stratonovich;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (use em, heun or rk4)");
}

Vec2 euler_maruyama_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                         std::size_t step_index) {
    check_channels(system, dw);
    Vec2 next = x + system.ito_drift()(t, x) * dt;
    for (std::size_t a = 0; a < dw.size(); ++a) next += system.channels()[a].field(t, x) * dw[a];
    check_finite(next, step_index);
    return next;
}

Vec2 heun_stratonovich_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                            std::size_t step_index) {
    check_channels(system, dw);
    return frozen_field_rk<false>(kHeun, system, x, t, dt, dw, step_index).next;
}

Vec2 rk4_stratonovich_step(const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
                           std::size_t step_index) {
    check_channels(system, dw);
    return frozen_field_rk<false>(kRk4, system, x, t, dt, dw, step_index).next;
}

Vec2 step(Scheme scheme, const SdeSystem& system, const Vec2& x, double t, double dt, std::span<const double> dw,
          std::size_t step_index) {
    switch (scheme) {
        case Scheme::euler_maruyama: return euler_maruyama_step(system, x, t, dt, dw, step_index);
        case Scheme::heun: return heun_stratonovich_step(system, x, t, dt, dw, step_index);
        case Scheme::rk4_stratonovich: return rk4_stratonovich_step(system, x, t, dt, dw, step_index);
    }
    throw std::invalid_argument("unknown scheme");
}

LinearizedStep linearized_step(Scheme scheme, const SdeSystem& system, const Vec2& x, double t, double dt,
                               std::span<const double> dw, std::size_t step_index) {
    check_channels(system, dw);
    if (scheme == Scheme::heun) return frozen_field_rk<true>(kHeun, system, x, t, dt, dw, step_index);
    if (scheme == Scheme::rk4_stratonovich) return frozen_field_rk<true>(kRk4, system, x, t, dt, dw, step_index);

    LinearizedStep out;
    out.next = x + system.ito_drift()(t, x) * dt;
    out.jacobian = Mat2::Identity() + system.ito_drift().jacobian(t, x) * dt;
    out.sensitivities.reserve(dw.size());
    for (std::size_t a = 0; a < dw.size(); ++a) {
        const Vec2 s = system.channels()[a].field(t, x);
        out.next += s * dw[a];
        out.jacobian += system.channels()[a].field.jacobian(t, x) * dw[a];
        out.sensitivities.push_back(s);
    }
    check_finite(out.next, step_index);
    if (!out.jacobian.allFinite()) throw IntegrationError("non-finite Jacobian", step_index);
    return out;
}

std::vector<Vec2> integrate_path(Scheme scheme, const SdeSystem& system, const Vec2& x0, double t0,
                                 const NoisePath& noise) {
    std::vector<Vec2> states;
    states.reserve(noise.steps() + 1);
    states.push_back(x0);
    Vec2 x = x0;
    for (std::size_t k = 0; k < noise.steps(); ++k) {
        x = step(scheme, system, x, t0 + static_cast<double>(k) * noise.dt(), noise.dt(), noise.at_step(k), k);
        states.push_back(x);
    }
    return states;
}

}  // namespace stochcirc
