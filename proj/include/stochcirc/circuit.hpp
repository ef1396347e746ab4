#pragma once

// =============================================================================
// Circuit core: idealized elements, Legendre machinery and the deterministic
// phase-space equations of a single-loop L-C-R-M circuit.
//
//     q' = I(p)
//     p' = -Phi_C'(q) - V_D(q, p) + e(t)
//
// with I(p) the inverse of K'(I), Phi_C the capacitor potential and V_D the
// dissipator voltage (series: Psi_R'(p) + M(q) I(p); parallel R||M: harmonic
// combination). The canonical momentum p plays the role of the inductor flux.
// =============================================================================

#include "stochcirc/scalar_function.hpp"
#include "stochcirc/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace stochcirc {

enum class ElementKind { inductor, capacitor, resistor, memristor };

[[nodiscard]] std::string_view to_string(ElementKind kind) noexcept;

/// A validated element: L(I) > 0, C(q) > 0, R(I) >= 0 or M(q) >= 0 on the domain.
struct Element {
    ElementKind kind;
    ScalarFunction characteristic;
};

/// Validates passivity of the characteristic on its domain; throws PassivityError.
Element make_element(ElementKind kind, ScalarFunction characteristic);

enum class DissipatorTopology { series, parallel };

/// Everything needed to build a PhaseSpaceModel. All characteristics share `domain`.
struct CircuitSpec {
    ScalarFunction inductance = ScalarFunction::constant(1.0);   // L(I)
    std::optional<ScalarFunction> capacitance;                   // C(q); constant only
    std::optional<ScalarFunction> potential_derivative;          // user-supplied Phi_C'(q)
    std::optional<ScalarFunction> resistance;                    // R(I)
    std::optional<ScalarFunction> memristance;                   // M(q)
    DissipatorTopology topology = DissipatorTopology::series;
    ScalarFunction drive = ScalarFunction::zero(kTimeDomain);    // e(t)
    Interval domain = kDefaultDomain;

    friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

/// Kinetic data of the inductor: K(I), its Legendre transform and the current map.
class KineticData {
public:
    [[nodiscard]] const ScalarFunction& kinetic_potential() const noexcept { return k_; }
    [[nodiscard]] const ScalarFunction& inductance_characteristic() const noexcept { return l_; }
    [[nodiscard]] std::optional<double> constant_inductance() const noexcept { return l0_; }

    /// Current I(p), the inverse of K'.
    [[nodiscard]] double current(double p) const;
    /// Legendre transform K(p) = p I(p) - K(I(p)).
    [[nodiscard]] double kinetic_energy(double p) const;
    /// Inductance seen at momentum p: L(I(p)).
    [[nodiscard]] double inductance(double p) const;
    /// Range of momenta reachable from the current domain.
    [[nodiscard]] const Interval& momentum_domain() const noexcept { return p_domain_; }

private:
    friend KineticData legendre(const ScalarFunction& k, const ScalarFunction& l);

    ScalarFunction k_;
    ScalarFunction k_prime_;
    ScalarFunction l_;
    std::optional<double> l0_;
    Interval p_domain_;
};

/// Builds the kinetic data from K with K'' = L > 0. The current map is a
/// safeguarded Newton inverse of K' (tolerance 1e-12) unless L is constant.
KineticData legendre(const ScalarFunction& k, const ScalarFunction& l);
/// Convenience: K = double antiderivative of L, vanishing with its slope at 0.
KineticData legendre_from_inductance(const ScalarFunction& l);

/// Phi_C with Phi_C(0) = 0 from a constant capacitance C0.
ScalarFunction capacitor_potential(const ScalarFunction& capacitance);
/// Phi_C from a user-supplied Phi_C'.
ScalarFunction capacitor_potential_from_derivative(const ScalarFunction& potential_derivative);

/// Psi_R'(p) = D_R'(I(p)) where D_R' = int R dI.
class MomentumFunction {
public:
    MomentumFunction() = default;
    MomentumFunction(ScalarFunction in_current, ScalarFunction rate_in_current, KineticData kinetic);

    [[nodiscard]] double operator()(double p) const;
    /// d/dp Psi_R' = R(I(p)) / L(I(p)).
    [[nodiscard]] double derivative(double p) const;
    /// Closed form as a function of p when the current map is linear.
    [[nodiscard]] const std::optional<ScalarFunction>& closed_form() const noexcept { return closed_; }
    [[nodiscard]] bool is_zero() const noexcept { return in_current_.is_zero(); }

private:
    ScalarFunction in_current_;
    ScalarFunction rate_;
    std::optional<KineticData> kinetic_;
    std::optional<ScalarFunction> closed_;
};

MomentumFunction resistor_potential(const ScalarFunction& resistance, const KineticData& kinetic);

/// Decomposition of a passive circuit: a Hamiltonian part and a dissipator voltage.
class PhaseSpaceModel {
public:
    /// Validates element passivity and builds all derived functions.
    static PhaseSpaceModel from_spec(CircuitSpec spec);

    [[nodiscard]] const CircuitSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const KineticData& kinetic() const noexcept { return kinetic_; }
    [[nodiscard]] const ScalarFunction& capacitor_potential() const noexcept { return phi_c_; }
    [[nodiscard]] const ScalarFunction& capacitor_force() const noexcept { return phi_c_prime_; }
    [[nodiscard]] const ScalarFunction& drive() const noexcept { return spec_.drive; }
    [[nodiscard]] const MomentumFunction& resistor_voltage_function() const noexcept { return psi_r_prime_; }
    /// M(q); the zero function when the circuit has no memristor.
    [[nodiscard]] const ScalarFunction& memristance() const noexcept { return memristance_; }
    /// R(I); the zero function when the circuit has no resistor.
    [[nodiscard]] const ScalarFunction& resistance() const noexcept { return resistance_; }

    [[nodiscard]] bool is_series() const noexcept { return spec_.topology == DissipatorTopology::series; }
    [[nodiscard]] std::optional<double> constant_inductance() const noexcept { return kinetic_.constant_inductance(); }

    [[nodiscard]] double resistor_voltage(double p) const;
    [[nodiscard]] double memristor_voltage(double q, double p) const;
    /// V_D(q, p); the parallel combination is 0 wherever either branch voltage is 0.
    [[nodiscard]] double dissipator_voltage(double q, double p) const;

private:
    CircuitSpec spec_;
    KineticData kinetic_;
    ScalarFunction phi_c_;
    ScalarFunction phi_c_prime_;
    ScalarFunction resistance_;
    ScalarFunction memristance_;
    MomentumFunction psi_r_prime_;
};

/// Deterministic circuit velocity (q', p').
Vec2 drift_field(const PhaseSpaceModel& model, double t, double q, double p);

/// gamma(q, p) = dV_D/dp >= 0; closed form for series models, central difference
/// otherwise. Throws PassivityError on a negative value.
double dissipation(const PhaseSpaceModel& model, double q, double p);

/// H(q, p, t) = K(p) + Phi_C(q) - e(t) q.
double energy(const PhaseSpaceModel& model, double t, double q, double p);

/// omega_0 = (L0 C0)^(-1/2).
double resonant_frequency(double inductance, double capacitance);

/// Short description of the dissipation law, e.g. "(R(I(p)) + M(q)) / L(I(p))".
std::string dissipation_formula(const PhaseSpaceModel& model);

}  // namespace stochcirc
