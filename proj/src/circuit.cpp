#include "stochcirc/circuit.hpp"

#include "stochcirc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stochcirc {

namespace {

constexpr int kPassivitySamples = 4001;

/// Minimum over a uniform sample of the domain, with the sample location.
std::pair<double, double> sampled_minimum(const ScalarFunction& f) {
    const Interval d = f.domain();
    double best = f.evaluate_unchecked(d.lo);
    double where = d.lo;
    for (int i = 1; i < kPassivitySamples; ++i) {
        const double x = d.lo + (d.hi - d.lo) * static_cast<double>(i) / (kPassivitySamples - 1);
        const double v = f.evaluate_unchecked(x);
        if (v < best) {
            best = v;
            where = x;
        }
    }
    // The origin matters most physically and is not always a grid node.
    if (d.contains(0.0) && f.evaluate_unchecked(0.0) < best) {
        best = f.evaluate_unchecked(0.0);
        where = 0.0;
    }
    return {best, where};
}

void require_positive(const ScalarFunction& f, std::string_view what, bool strict) {
    const auto [m, at] = sampled_minimum(f);
    if ((strict && m <= 0.0) || (!strict && m < 0.0)) {
        std::ostringstream os;
        os << what << " must be " << (strict ? "> 0" : ">= 0") << " on its domain; found " << m << " at " << at;
        throw PassivityError(os.str());
    }
}

}  // namespace

std::string_view to_string(ElementKind kind) noexcept {
    switch (kind) {
        case ElementKind::inductor: return "inductor";
        case ElementKind::capacitor: return "capacitor";
        case ElementKind::resistor: return "resistor";
        case ElementKind::memristor: return "memristor";
    }
    return "unknown";
}

Element make_element(ElementKind kind, ScalarFunction characteristic) {
    switch (kind) {
        case ElementKind::inductor: require_positive(characteristic, "inductance L(I)", true); break;
        case ElementKind::capacitor: require_positive(characteristic, "capacitance C(q)", true); break;
        case ElementKind::resistor: require_positive(characteristic, "resistance R(I)", false); break;
        case ElementKind::memristor: require_positive(characteristic, "memristance M(q)", false); break;
    }
    return Element{kind, std::move(characteristic)};
}

// ---------------------------------------------------------------------------
// Kinetic data
// ---------------------------------------------------------------------------

KineticData legendre(const ScalarFunction& k, const ScalarFunction& l) {
    const ScalarFunction k2 = k.derivative().derivative();
    const Interval d = k.domain();
    for (int i = 0; i <= 64; ++i) {
        const double x = d.lo + (d.hi - d.lo) * i / 64.0;
        const double a = k2.evaluate_unchecked(x);
        const double b = l.evaluate_unchecked(x);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
            throw std::invalid_argument("legendre: K'' does not match the inductance characteristic L");
        }
    }
    try {
        require_positive(l, "inductance K''(I)", true);
    } catch (const PassivityError& e) {
        throw PassivityError(std::string("K' is not strictly increasing: ") + e.what());
    }

    KineticData out;
    out.k_ = k;
    out.k_prime_ = k.derivative();
    out.l_ = l;
    if (l.is_constant()) out.l0_ = l.constant_value();
    out.p_domain_ = {out.k_prime_.evaluate_unchecked(d.lo), out.k_prime_.evaluate_unchecked(d.hi)};
    return out;
}

KineticData legendre_from_inductance(const ScalarFunction& l) {
    return legendre(l.antiderivative().antiderivative(), l);
}

double KineticData::current(double p) const {
    if (l0_) return p / *l0_;
    if (!p_domain_.contains(p)) {
        std::ostringstream os;
        os << "momentum " << p << " outside the range of K' [" << p_domain_.lo << ", " << p_domain_.hi << "]";
        throw DomainError(os.str());
    }
    // Safeguarded Newton on K'(I) - p, which is strictly increasing.
    double lo = k_.domain().lo;
    double hi = k_.domain().hi;
    double x = std::clamp(p / l_.evaluate_unchecked(0.0), lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double r = k_prime_.evaluate_unchecked(x) - p;
        if (r == 0.0) return x;
        if (r > 0.0) hi = x; else lo = x;
        double next = x - r / l_.evaluate_unchecked(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-12 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) {
            return next;
        }
        x = next;
    }
    return x;
}

double KineticData::kinetic_energy(double p) const {
    const double i = current(p);
    return p * i - k_(i);
}

double KineticData::inductance(double p) const {
    if (l0_) return *l0_;
    return l_(current(p));
}

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

ScalarFunction capacitor_potential(const ScalarFunction& capacitance) {
    if (!capacitance.is_constant()) {
        throw NotRepresentableError(
            "1/C(q) is not a polynomial for non-constant C; supply the capacitor force Phi_C'(q) directly (dPhi=...)");
    }
    const double c0 = capacitance.constant_value();
    if (!(c0 > 0.0)) throw PassivityError("capacitance C0 must be > 0");
    return ScalarFunction::polynomial({0.0, 0.0, 0.5 / c0}, capacitance.domain());
}

ScalarFunction capacitor_potential_from_derivative(const ScalarFunction& potential_derivative) {
    return potential_derivative.antiderivative();
}

MomentumFunction::MomentumFunction(ScalarFunction in_current, ScalarFunction rate_in_current, KineticData kinetic)
    : in_current_(std::move(in_current)), rate_(std::move(rate_in_current)), kinetic_(std::move(kinetic)) {
    if (auto l0 = kinetic_->constant_inductance()) {
        closed_ = in_current_.with_scaled_argument(1.0 / *l0);
    }
}

double MomentumFunction::operator()(double p) const {
    if (closed_) return (*closed_)(p);
    if (!kinetic_) return 0.0;
    return in_current_(kinetic_->current(p));
}

double MomentumFunction::derivative(double p) const {
    if (!kinetic_) return 0.0;
    const double i = kinetic_->current(p);
    return rate_(i) / kinetic_->inductance(p);
}

MomentumFunction resistor_potential(const ScalarFunction& resistance, const KineticData& kinetic) {
    return MomentumFunction(resistance.antiderivative(), resistance, kinetic);
}

// ---------------------------------------------------------------------------
// Phase-space model
// ---------------------------------------------------------------------------

PhaseSpaceModel PhaseSpaceModel::from_spec(CircuitSpec spec) {
    const Interval d = spec.domain;
    spec.inductance = spec.inductance.with_domain(d);
    PhaseSpaceModel m;
    make_element(ElementKind::inductor, spec.inductance);
    m.kinetic_ = legendre_from_inductance(spec.inductance);

    if (spec.capacitance && spec.potential_derivative) {
        throw std::invalid_argument("capacitor given both as C(q) and as Phi_C'(q)");
    }
    if (spec.capacitance) {
        spec.capacitance = spec.capacitance->with_domain(d);
        make_element(ElementKind::capacitor, *spec.capacitance);
        m.phi_c_ = stochcirc::capacitor_potential(*spec.capacitance);
    } else if (spec.potential_derivative) {
        spec.potential_derivative = spec.potential_derivative->with_domain(d);
        // 1/C(q) = Phi_C''(q) must be positive.
        require_positive(spec.potential_derivative->derivative(), "capacitor stiffness Phi_C''(q)", true);
        m.phi_c_ = capacitor_potential_from_derivative(*spec.potential_derivative);
    } else {
        m.phi_c_ = ScalarFunction::zero(d);
    }
    m.phi_c_prime_ = m.phi_c_.derivative();

    m.resistance_ = ScalarFunction::zero(d);
    if (spec.resistance) {
        spec.resistance = spec.resistance->with_domain(d);
        make_element(ElementKind::resistor, *spec.resistance);
        m.resistance_ = *spec.resistance;
    }
    m.memristance_ = ScalarFunction::zero(d);
    if (spec.memristance) {
        spec.memristance = spec.memristance->with_domain(d);
        make_element(ElementKind::memristor, *spec.memristance);
        m.memristance_ = *spec.memristance;
    }
    if (spec.topology == DissipatorTopology::parallel && (!spec.resistance || !spec.memristance)) {
        throw std::invalid_argument("a parallel dissipator needs exactly one resistor and one memristor");
    }
    m.psi_r_prime_ = resistor_potential(m.resistance_, m.kinetic_);
    m.spec_ = std::move(spec);
    return m;
}

double PhaseSpaceModel::resistor_voltage(double p) const { return psi_r_prime_(p); }

double PhaseSpaceModel::memristor_voltage(double q, double p) const {
    if (memristance_.is_zero()) return 0.0;
    return memristance_(q) * kinetic_.current(p);
}

double PhaseSpaceModel::dissipator_voltage(double q, double p) const {
    const double vr = resistor_voltage(p);
    const double vm = memristor_voltage(q, p);
    if (is_series()) return vr + vm;
    if (vr == 0.0 || vm == 0.0) return 0.0;
    const double sum = vr + vm;
    if (sum == 0.0) return 0.0;
    return vr * vm / sum;
}

Vec2 drift_field(const PhaseSpaceModel& model, double t, double q, double p) {
    return {model.kinetic().current(p),
            -model.capacitor_force()(q) - model.dissipator_voltage(q, p) + model.drive()(t)};
}

double dissipation(const PhaseSpaceModel& model, double q, double p) {
    double gamma = 0.0;
    if (model.is_series()) {
        const double i = model.kinetic().current(p);
        const double r = model.resistance().is_zero() ? 0.0 : model.resistance()(i);
        const double m = model.memristance().is_zero() ? 0.0 : model.memristance()(q);
        gamma = (r + m) / model.kinetic().inductance(p);
    } else {
        const double h = 1e-6 * std::max(1.0, std::abs(p));
        gamma = (model.dissipator_voltage(q, p + h) - model.dissipator_voltage(q, p - h)) / (2.0 * h);
    }
    if (gamma < -1e-9) {
        std::ostringstream os;
        os << "negative dissipation " << gamma << " at (q, p) = (" << q << ", " << p << ")";
        throw PassivityError(os.str());
    }
    return gamma;
}

double energy(const PhaseSpaceModel& model, double t, double q, double p) {
    return model.kinetic().kinetic_energy(p) + model.capacitor_potential()(q) - model.drive()(t) * q;
}

double resonant_frequency(double inductance, double capacitance) {
    return 1.0 / std::sqrt(inductance * capacitance);
}

std::string dissipation_formula(const PhaseSpaceModel& model) {
    if (!model.is_series()) return "d/dp [ (V_R(p)^-1 + V_M(q,p)^-1)^-1 ]";
    std::ostringstream os;
    os << "(" << model.resistance().to_string("I(p)") << " + " << model.memristance().to_string("q") << ") / ";
    if (auto l0 = model.constant_inductance()) os << *l0; else os << "L(I(p))";
    return os.str();
}

}  // namespace stochcirc
