#pragma once

// =============================================================================
// Canonical stochastic dilations of a dissipative circuit
// =============================================================================
// Wiener form: Stratonovich drift J grad H, one channel per generator F_a with
// diffusion J grad F_a. The Ito drift then equals the circuit velocity field.
//
//   H  = p^2/2L0 + Phi_C(q) + W'(p) q/2 + G'(q) p/2 - e(t) q
//   F1 = q^2/2c + c W(p)        W'  = Psi_R'
//   F2 = p^2/2l + l G(q)        G'' = M / L0
//
// Symplectic form: each pair (F_a, G_a) drives a (Q_a, P_a) channel pair with
// diffusions J grad F_a and J grad G_a; a divergence field u with
// div u = -Gamma sum {F_a, G_a} is added to the Stratonovich drift.
//
//   H  = p^2/2L0 + Phi_C(q) - e(t) q
//   (F1, G1) = (rho(p), -q)     rho = Psi_R' / Gamma
//   (F2, G2) = (p, -mu(q))      mu' = M / (Gamma L0)
// =============================================================================

#include "stochcirc/circuit.hpp"
#include "stochcirc/sde.hpp"

#include "json.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace stochcirc {

struct WienerDilation {
    PhaseFunction hamiltonian;
    /// The part of H beyond the circuit Hamiltonian: W'(p) q/2 + G'(q) p/2.
    PhaseFunction hamiltonian_shift;
    std::vector<PhaseFunction> generators;
    ScalarFunction w;   // W(p)
    ScalarFunction g;   // G(q)
    double c = 1.0;
    double ell = 1.0;
    SdeSystem system;
};

/// Requires a series model with constant inductance; c, ell > 0.
WienerDilation build_wiener_dilation(const PhaseSpaceModel& model, double c = 1.0, double ell = 1.0);

/// Generic Wiener-noise canonical system: w = J grad H, sigma_a = J grad F_a.
SdeSystem wiener_canonical_system(const PhaseFunction& h, const std::vector<PhaseFunction>& generators,
                                  const std::vector<std::string>& labels = {});

enum class UFieldForm { particular, corollary };

/// Divergence field with div u = -Gamma sum_a {F_a, G_a}.
VectorField u_field(const std::vector<PhaseFunction>& f, const std::vector<PhaseFunction>& g, double gamma,
                    UFieldForm form = UFieldForm::corollary);

/// Sign reading of the momentum diffusion in the symplectic dilation.
enum class MomentumNoiseSigns {
    bracket_derived,   // dp gets +dP1 + mu'(q) dP2, i.e. {p, G_a}
    printed,           // dp gets -dP1 - M(q)/(Gamma L0) dP2
};

struct SymplecticDilation {
    PhaseFunction hamiltonian;
    std::vector<PhaseFunction> f;
    std::vector<PhaseFunction> g;
    ScalarFunction rho;   // rho(p)
    ScalarFunction mu;    // mu(q)
    double gamma = 1.0;
    VectorField u;
    SdeSystem system;
};

/// Channels ordered Q1, P1, Q2, P2, ... with pairs (Q_a, P_a) of weight Gamma.
SymplecticDilation symplectic_canonical_system(const PhaseFunction& h, std::vector<PhaseFunction> f,
                                               std::vector<PhaseFunction> g, double gamma,
                                               UFieldForm form = UFieldForm::corollary,
                                               const std::vector<std::string>& labels = {});

/// Requires a series model with constant inductance; Gamma > 0.
SymplecticDilation build_symplectic_dilation(const PhaseSpaceModel& model, double gamma,
                                             MomentumNoiseSigns signs = MomentumNoiseSigns::bracket_derived);

/// The single-pair LC example: F = p, G = -q with u = (0, -Gamma p).
SymplecticDilation lc_symplectic_example(double inductance, double capacitance, double gamma,
                                         const ScalarFunction& drive = ScalarFunction::zero(kTimeDomain));

/// Circuit Hamiltonian p^2/2L0 + Phi_C(q) - e(t) q (constant inductance only).
PhaseFunction circuit_hamiltonian(const PhaseSpaceModel& model);

/// Ito drift of the circuit as an analytic field: (p/L0, -Phi_C' - Psi_R' - M p/L0 + e).
VectorField circuit_velocity_field(const PhaseSpaceModel& model);

/// sum_a [{F_aq, F_ap} + {G_aq, G_ap} + Gamma {F_a, G_a}].
PhaseFunction paired_noise_dissipation(const std::vector<PhaseFunction>& f, const std::vector<PhaseFunction>& g,
                                       double gamma);
/// Gamma sum_a {F_a, G_a}.
PhaseFunction pair_bracket_dissipation(const SymplecticDilation& d);

// -----------------------------------------------------------------------------
// Residual and structure checks on a grid
// -----------------------------------------------------------------------------

struct Grid {
    double q_lo = -2.0, q_hi = 2.0;
    double p_lo = -2.0, p_hi = 2.0;
    int n = 41;

    [[nodiscard]] double q(int i) const { return q_lo + (q_hi - q_lo) * i / (n - 1); }
    [[nodiscard]] double p(int j) const { return p_lo + (p_hi - p_lo) * j / (n - 1); }
};

struct Residuals {
    double r0 = 0.0;
    double rv = 0.0;
};

/// Max-abs residuals of
///   sum F_p F_qp - sum F_q F_pp + 2 K_p = 0
///   sum F_p F_qq - sum F_q F_pq + 2 K_q = 2 V_D
/// where K is an optional Hamiltonian shift (zero gives the unshifted equations).
Residuals determining_residuals(const std::vector<ScalarField>& f, const std::function<double(double, double)>& voltage,
                            const Grid& grid = {}, const std::optional<ScalarField>& shift = std::nullopt);

/// Outcome of the single-generator ratio test (F_q / F_p independent of p).
struct XiResult {
    bool ok = false;
    double max_variation = 0.0;
    std::vector<double> q_nodes;
    std::vector<double> xi;   // p-average of the ratio at each q node

    /// Linear interpolation of the tabulated xi(q).
    [[nodiscard]] double operator()(double q) const;
};

/// Throws std::invalid_argument where F_p vanishes on the grid.
XiResult xi_condition(const ScalarField& f, const Grid& grid = {}, double tolerance = 1e-8);

/// sum_a det Hess F_a at (q, p).
double hessian_dissipation(const std::vector<ScalarField>& f, double q, double p);

/// Componentwise Ito drift from (H, F_a) and its compact matrix form.
Vec2 ito_drift_componentwise(const ScalarField& h, const std::vector<ScalarField>& f, double q, double p);
Vec2 ito_drift_compact(const ScalarField& h, const std::vector<ScalarField>& f, double q, double p);

std::vector<ScalarField> scalar_fields(const std::vector<PhaseFunction>& f, double t = 0.0);

// -----------------------------------------------------------------------------
// Export
// -----------------------------------------------------------------------------

nlohmann::json to_json(const WienerDilation& d);
nlohmann::json to_json(const SymplecticDilation& d);

}  // namespace stochcirc
