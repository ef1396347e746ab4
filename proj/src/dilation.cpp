#include "stochcirc/dilation.hpp"

#include "stochcirc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochcirc {

namespace {

double series_constant_inductance(const PhaseSpaceModel& model, const char* who) {
    if (!model.is_series()) {
        throw UnsupportedModelError(std::string(who) + ": parallel dissipators are not series-decomposable");
    }
    const auto l0 = model.constant_inductance();
    if (!l0) throw UnsupportedModelError(std::string(who) + ": requires a constant inductance L0");
    return *l0;
}

ScalarFunction resistor_voltage_in_p(const PhaseSpaceModel& model) {
    const auto& closed = model.resistor_voltage_function().closed_form();
    if (!closed) throw UnsupportedModelError("resistor voltage has no closed form in p");
    return *closed;
}

std::string label_or(const std::vector<std::string>& labels, std::size_t i, const std::string& fallback) {
    return i < labels.size() ? labels[i] : fallback;
}

}  // namespace

PhaseFunction circuit_hamiltonian(const PhaseSpaceModel& model) {
    const double l0 = series_constant_inductance(model, "circuit_hamiltonian");
    return PhaseFunction::of_p(ScalarFunction::polynomial({0.0, 0.0, 0.5 / l0}, kTimeDomain)) +
           PhaseFunction::of_q(model.capacitor_potential()) - PhaseFunction::q() * PhaseFunction::of_t(model.drive());
}

VectorField circuit_velocity_field(const PhaseSpaceModel& model) {
    const double l0 = series_constant_inductance(model, "circuit_velocity_field");
    const PhaseFunction vq = PhaseFunction::p().scaled(1.0 / l0);
    const PhaseFunction vp = -PhaseFunction::of_q(model.capacitor_force()) -
                             PhaseFunction::of_p(resistor_voltage_in_p(model)) -
                             (PhaseFunction::of_q(model.memristance()) * PhaseFunction::p()).scaled(1.0 / l0) +
                             PhaseFunction::of_t(model.drive());
    return VectorField::analytic(vq, vp);
}

SdeSystem wiener_canonical_system(const PhaseFunction& h, const std::vector<PhaseFunction>& generators,
                                  const std::vector<std::string>& labels) {
    std::vector<DiffusionChannel> channels;
    for (std::size_t a = 0; a < generators.size(); ++a) {
        channels.push_back({{label_or(labels, a, "B" + std::to_string(a + 1)), ChannelKind::plain},
                            VectorField::hamiltonian(generators[a])});
    }
    return SdeSystem::from_stratonovich(VectorField::hamiltonian(h), std::move(channels));
}

WienerDilation build_wiener_dilation(const PhaseSpaceModel& model, double c, double ell) {
    const double l0 = series_constant_inductance(model, "build_wiener_dilation");
    if (!(c > 0.0) || !(ell > 0.0)) throw std::invalid_argument("build_wiener_dilation: c and l must be positive");

    WienerDilation d;
    d.c = c;
    d.ell = ell;
    d.w = resistor_voltage_in_p(model).antiderivative();
    d.g = model.memristance().scaled(1.0 / l0).antiderivative().antiderivative();

    d.hamiltonian_shift = (PhaseFunction::of_p(d.w.derivative()) * PhaseFunction::q() +
                           PhaseFunction::of_q(d.g.derivative()) * PhaseFunction::p())
                              .scaled(0.5);
    d.hamiltonian = circuit_hamiltonian(model) + d.hamiltonian_shift;
    d.generators = {
        PhaseFunction::of_q(ScalarFunction::polynomial({0.0, 0.0, 0.5 / c}, kTimeDomain)) +
            PhaseFunction::of_p(d.w.scaled(c)),
        PhaseFunction::of_p(ScalarFunction::polynomial({0.0, 0.0, 0.5 / ell}, kTimeDomain)) +
            PhaseFunction::of_q(d.g.scaled(ell)),
    };
    d.system = wiener_canonical_system(d.hamiltonian, d.generators, {"resistance", "memristance"});
    return d;
}

VectorField u_field(const std::vector<PhaseFunction>& f, const std::vector<PhaseFunction>& g, double gamma,
                    UFieldForm form) {
    if (f.size() != g.size()) throw std::invalid_argument("u_field: F and G lists differ in length");
    PhaseFunction uq, up;
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (form == UFieldForm::corollary) {
            uq = uq - f[a] * g[a].dp();
            up = up + f[a] * g[a].dq();
        } else {
            uq = uq + (g[a] * f[a].dp() - f[a] * g[a].dp()).scaled(0.5);
            up = up + (f[a] * g[a].dq() - g[a] * f[a].dq()).scaled(0.5);
        }
    }
    return VectorField::analytic(uq.scaled(gamma), up.scaled(gamma));
}

SymplecticDilation symplectic_canonical_system(const PhaseFunction& h, std::vector<PhaseFunction> f,
                                               std::vector<PhaseFunction> g, double gamma, UFieldForm form,
                                               const std::vector<std::string>& labels) {
    if (!(gamma > 0.0)) throw std::invalid_argument("symplectic dilation: Gamma must be positive");
    SymplecticDilation d;
    d.hamiltonian = h;
    d.gamma = gamma;
    d.u = u_field(f, g, gamma, form);
    std::vector<DiffusionChannel> channels;
    std::vector<SymplecticPair> pairs;
    for (std::size_t a = 0; a < f.size(); ++a) {
        const std::string suffix = std::to_string(a + 1);
        const std::string tag = a < labels.size() ? " (" + labels[a] + ")" : "";
        pairs.push_back({channels.size(), channels.size() + 1, gamma});
        channels.push_back({{"Q" + suffix + tag, ChannelKind::symplectic_q}, VectorField::hamiltonian(f[a])});
        channels.push_back({{"P" + suffix + tag, ChannelKind::symplectic_p}, VectorField::hamiltonian(g[a])});
    }
    d.system = SdeSystem::from_stratonovich(VectorField::hamiltonian(h) + d.u, std::move(channels), std::move(pairs));
    d.f = std::move(f);
    d.g = std::move(g);
    return d;
}

SymplecticDilation build_symplectic_dilation(const PhaseSpaceModel& model, double gamma, MomentumNoiseSigns signs) {
    const double l0 = series_constant_inductance(model, "build_symplectic_dilation");
    if (!(gamma > 0.0)) throw std::invalid_argument("build_symplectic_dilation: Gamma must be positive");

    const ScalarFunction rho = resistor_voltage_in_p(model).scaled(1.0 / gamma);
    const ScalarFunction mu = model.memristance().scaled(1.0 / (gamma * l0)).antiderivative();
    std::vector<PhaseFunction> f{PhaseFunction::of_p(rho), PhaseFunction::p()};
    std::vector<PhaseFunction> g{-PhaseFunction::q(), -PhaseFunction::of_q(mu)};

    SymplecticDilation d = symplectic_canonical_system(circuit_hamiltonian(model), std::move(f), std::move(g), gamma,
                                                       UFieldForm::corollary, {"resistance", "memristance"});
    d.rho = rho;
    d.mu = mu;
    if (signs == MomentumNoiseSigns::printed) {
        // Same Ito drift, momentum diffusion -dP1 - M(q)/(Gamma L0) dP2.
        auto channels = d.system.channels();
        channels[1].field = VectorField::analytic(PhaseFunction{}, PhaseFunction::constant(-1.0));
        channels[3].field =
            VectorField::analytic(PhaseFunction{}, -PhaseFunction::of_q(model.memristance().scaled(1.0 / (gamma * l0))));
        d.system = SdeSystem::from_ito(d.system.ito_drift(), std::move(channels), d.system.pairs());
    }
    return d;
}

SymplecticDilation lc_symplectic_example(double inductance, double capacitance, double gamma,
                                         const ScalarFunction& drive) {
    if (!(inductance > 0.0) || !(capacitance > 0.0)) throw std::invalid_argument("L0 and C0 must be positive");
    const PhaseFunction h = PhaseFunction::of_p(ScalarFunction::polynomial({0.0, 0.0, 0.5 / inductance}, kTimeDomain)) +
                            PhaseFunction::of_q(ScalarFunction::polynomial({0.0, 0.0, 0.5 / capacitance}, kTimeDomain)) -
                            PhaseFunction::q() * PhaseFunction::of_t(drive);
    return symplectic_canonical_system(h, {PhaseFunction::p()}, {-PhaseFunction::q()}, gamma, UFieldForm::corollary);
}

PhaseFunction paired_noise_dissipation(const std::vector<PhaseFunction>& f, const std::vector<PhaseFunction>& g,
                                       double gamma) {
    PhaseFunction out;
    for (std::size_t a = 0; a < f.size(); ++a) {
        out = out + poisson_bracket(f[a].dq(), f[a].dp()) + poisson_bracket(g[a].dq(), g[a].dp()) +
              poisson_bracket(f[a], g[a]).scaled(gamma);
    }
    return out;
}

PhaseFunction pair_bracket_dissipation(const SymplecticDilation& d) {
    PhaseFunction out;
    for (std::size_t a = 0; a < d.f.size(); ++a) out = out + poisson_bracket(d.f[a], d.g[a]);
    return out.scaled(d.gamma);
}

// ---------------------------------------------------------------------------
// Grid checks
// ---------------------------------------------------------------------------

Residuals determining_residuals(const std::vector<ScalarField>& f, const std::function<double(double, double)>& voltage,
                            const Grid& grid, const std::optional<ScalarField>& shift) {
    Residuals r;
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.n; ++j) {
            const double q = grid.q(i);
            const double p = grid.p(j);
            double lhs0 = 0.0;
            double lhsv = 0.0;
            for (const auto& fa : f) {
                const Vec2 gr = fa.gradient(q, p);
                const Mat2 he = fa.hessian(q, p);
                lhs0 += gr(1) * he(0, 1) - gr(0) * he(1, 1);
                lhsv += gr(1) * he(0, 0) - gr(0) * he(1, 0);
            }
            if (shift) {
                const Vec2 k = shift->gradient(q, p);
                lhs0 += 2.0 * k(1);
                lhsv += 2.0 * k(0);
            }
            r.r0 = std::max(r.r0, std::abs(lhs0));
            r.rv = std::max(r.rv, std::abs(lhsv - 2.0 * voltage(q, p)));
        }
    }
    return r;
}

double XiResult::operator()(double q) const {
    if (q_nodes.empty()) throw std::logic_error("xi is not tabulated");
    if (q <= q_nodes.front()) return xi.front();
    if (q >= q_nodes.back()) return xi.back();
    const auto it = std::upper_bound(q_nodes.begin(), q_nodes.end(), q);
    const std::size_t k = static_cast<std::size_t>(it - q_nodes.begin());
    const double s = (q - q_nodes[k - 1]) / (q_nodes[k] - q_nodes[k - 1]);
    return (1.0 - s) * xi[k - 1] + s * xi[k];
}

XiResult xi_condition(const ScalarField& f, const Grid& grid, double tolerance) {
    XiResult out;
    for (int i = 0; i < grid.n; ++i) {
        const double q = grid.q(i);
        double lo = 0.0, hi = 0.0, sum = 0.0;
        for (int j = 0; j < grid.n; ++j) {
            const double p = grid.p(j);
            const Vec2 gr = f.gradient(q, p);
            if (std::abs(gr(1)) < 1e-14) {
                throw std::invalid_argument("xi_condition: dF/dp vanishes at (" + std::to_string(q) + ", " +
                                            std::to_string(p) + ")");
            }
            const double ratio = gr(0) / gr(1);
            lo = j ? std::min(lo, ratio) : ratio;
            hi = j ? std::max(hi, ratio) : ratio;
            sum += ratio;
        }
        out.max_variation = std::max(out.max_variation, hi - lo);
        out.q_nodes.push_back(q);
        out.xi.push_back(sum / grid.n);
    }
    out.ok = out.max_variation < tolerance;
    return out;
}

double hessian_dissipation(const std::vector<ScalarField>& f, double q, double p) {
    double acc = 0.0;
    for (const auto& fa : f) acc += fa.hessian(q, p).determinant();
    return acc;
}

Vec2 ito_drift_componentwise(const ScalarField& h, const std::vector<ScalarField>& f, double q, double p) {
    const Vec2 gh = h.gradient(q, p);
    Vec2 v(gh(1), -gh(0));
    for (const auto& fa : f) {
        const Vec2 g = fa.gradient(q, p);
        const Mat2 he = fa.hessian(q, p);
        v(0) += 0.5 * g(1) * he(0, 1) - 0.5 * g(0) * he(1, 1);
        v(1) += -0.5 * g(1) * he(0, 0) + 0.5 * g(0) * he(1, 0);
    }
    return v;
}

Vec2 ito_drift_compact(const ScalarField& h, const std::vector<ScalarField>& f, double q, double p) {
    const Mat2 j = symplectic_matrix();
    Vec2 v = j * h.gradient(q, p);
    for (const auto& fa : f) v += 0.5 * j * fa.hessian(q, p) * j * fa.gradient(q, p);
    return v;
}

std::vector<ScalarField> scalar_fields(const std::vector<PhaseFunction>& f, double t) {
    std::vector<ScalarField> out;
    out.reserve(f.size());
    for (const auto& fa : f) out.push_back(ScalarField::from(fa, t));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json channels_json(const SdeSystem& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : s.channels()) {
        const char* kind = c.info.kind == ChannelKind::plain          ? "plain"
                           : c.info.kind == ChannelKind::symplectic_q ? "symplectic_q"
                                                                      : "symplectic_p";
        nlohmann::json entry{{"label", c.info.label}, {"kind", kind}};
        if (c.field.is_analytic()) {
            entry["diffusion"] = {{"q", c.field.q_component().to_json()}, {"p", c.field.p_component().to_json()}};
        }
        arr.push_back(entry);
    }
    return arr;
}

nlohmann::json field_json(const VectorField& v) {
    if (!v.is_analytic()) return nullptr;
    return {{"q", v.q_component().to_json()}, {"p", v.p_component().to_json()}};
}

}  // namespace

nlohmann::json to_json(const WienerDilation& d) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& f : d.generators) gens.push_back(f.to_json());
    return {{"kind", "wiener"},
            {"parameters", {{"c", d.c}, {"l", d.ell}}},
            {"H", d.hamiltonian.to_json()},
            {"F", gens},
            {"W", d.w.to_string("p")},
            {"G", d.g.to_string("q")},
            {"channels", channels_json(d.system)},
            {"ito_drift", field_json(d.system.ito_drift())}};
}

nlohmann::json to_json(const SymplecticDilation& d) {
    nlohmann::json fs = nlohmann::json::array();
    nlohmann::json gs = nlohmann::json::array();
    for (const auto& f : d.f) fs.push_back(f.to_json());
    for (const auto& g : d.g) gs.push_back(g.to_json());
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : d.system.pairs()) pairs.push_back({{"Q", p.q_channel}, {"P", p.p_channel}, {"Gamma", p.gamma}});
    return {{"kind", "symplectic"},
            {"parameters", {{"Gamma", d.gamma}}},
            {"H", d.hamiltonian.to_json()},
            {"F", fs},
            {"G", gs},
            {"u", field_json(d.u)},
            {"channels", channels_json(d.system)},
            {"pairs", pairs},
            {"ito_drift", field_json(d.system.ito_drift())}};
}

}  // namespace stochcirc
