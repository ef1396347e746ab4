#pragma once

// Truncated-Fock realization of the quantum dilation: ladder and quadrature
// matrices, the Lindblad generator in both pictures, operator identities on
// the interior block, and a master-equation integrator.
//
// All identities that hold in the untruncated algebra are checked only on the
// interior projection P onto levels 0 .. N-1-m; ladder truncation corrupts the
// top levels of every product.

#include "stochcirc/circuit.hpp"
#include "stochcirc/dilation.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

namespace stochcirc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Annihilation operator on levels 0 .. n-1: a|k> = sqrt(k)|k-1>. Requires n >= 1.
CMatrix ladder_operator(std::size_t n);

struct FockModel {
    std::size_t dimension = 0;
    std::size_t margin = 0;
    double hbar = 1.0;
    double inductance = 1.0;
    double capacitance = 1.0;
    double omega0 = 1.0;
    CMatrix a, a_dag, number, q, p;

    [[nodiscard]] std::size_t interior() const noexcept { return dimension - margin; }
    /// P X P as the interior x interior block.
    [[nodiscard]] CMatrix project(const CMatrix& x) const { return x.topLeftCorner(interior(), interior()); }
    /// Frobenius norm of P X P.
    [[nodiscard]] double interior_norm(const CMatrix& x) const { return project(x).norm(); }
    [[nodiscard]] CMatrix identity() const { return CMatrix::Identity(dimension, dimension); }
};

/// q = sqrt(hbar w0 C0 / 2)(a + a*), p = i sqrt(hbar w0 L0 / 2)(a* - a).
/// Requires N >= 8 and 1 <= m < N/2; all constants positive.
FockModel fock_model(std::size_t n, std::size_t margin, double hbar = 1.0, double inductance = 1.0,
                     double capacitance = 1.0);
/// Margin N/4.
FockModel fock_model(std::size_t n);

/// Max-abs entry of A - A*, relative to max(1, max-abs entry of A).
double hermiticity_defect(const CMatrix& a);

/// Spectral calculus phi(A) for Hermitian A; throws std::invalid_argument when
/// hermiticity_defect(A) >= 1e-12.
CMatrix operator_function(const CMatrix& a, const std::function<double(double)>& phi);
/// Evaluates phi without its domain check: truncation-edge eigenvalues may lie
/// outside the declared domain and only affect levels outside the interior.
CMatrix operator_function(const CMatrix& a, const ScalarFunction& phi);

/// (X Y + Y X) / 2.
CMatrix symmetrized(const CMatrix& x, const CMatrix& y);

struct QuantumDilation {
    ScalarFunction f;          // f(p) = Psi_R'(p) / 2
    ScalarFunction g;          // g' = M / 2L0, g(0) = 0
    ScalarFunction capacitor_force;
    ScalarFunction resistor_voltage;
    ScalarFunction memristance;
    ScalarFunction drive;
    double inductance = 1.0;
    double hbar = 1.0;

    CMatrix h0_static;         // p^2/2L0 + Phi_C(q)
    CMatrix k;                 // sym(f(p), q) + sym(p, g(q))
    CMatrix h_static;          // h0_static + k
    CMatrix l1;                // q + (i/hbar) f(p)
    CMatrix l2;                // g(q)/hbar + i p
    CMatrix q, p;

    /// H(t) = h_static - e(t) q.
    [[nodiscard]] CMatrix hamiltonian(double t) const;
    [[nodiscard]] std::vector<CMatrix> couplings() const { return {l1, l2}; }
};

/// Requires a series model with constant inductance and polynomial Psi_R' and M.
QuantumDilation build_quantum_dilation(const PhaseSpaceModel& model, const FockModel& fock);

/// Couplings -G_1(q) + (i/hbar) F_1(p) and -G_2(q)/hbar + i F_2(p) read off a
/// two-pair symplectic dilation. With Gamma = 2 these are the quantum L1, L2.
std::vector<CMatrix> couplings_from_symplectic(const SymplecticDilation& d, const FockModel& fock);

/// 1/2 sum [L*, X] L + 1/2 sum L* [X, L] + (1/(i hbar)) [X, H].
CMatrix lindblad_heisenberg(const CMatrix& h, const std::vector<CMatrix>& couplings, const CMatrix& x, double hbar);
/// -(i/hbar) [H, rho] + sum (L rho L* - 1/2 {L* L, rho}).
CMatrix lindblad_schrodinger(const CMatrix& h, const std::vector<CMatrix>& couplings, const CMatrix& rho,
                             double hbar);

/// Coefficients of dQ and dP in dj(X): (1/2)([X, L] + [L*, X]) and (1/2)(-i [X, L] + i [L*, X]).
CMatrix noise_coefficient_q(const CMatrix& x, const CMatrix& l);
CMatrix noise_coefficient_p(const CMatrix& x, const CMatrix& l);

struct NoiseCoefficientCheck {
    std::string name;
    double residual = 0.0;   // relative to the interior norm of the expected value, absolute when that is 0
};

struct OperatorIdentityReport {
    std::size_t dimension = 0;
    std::size_t margin = 0;
    double drift_q_rel = 0.0;   // |P(L q - p/L0)P| / |P L q P|
    double drift_p_rel = 0.0;   // |P(L p - v^p)P| / |P L p P|
    std::vector<NoiseCoefficientCheck> noise;
    double hamiltonian_hermiticity = 0.0;

    [[nodiscard]] double max_noise_residual() const;
};

/// Drift identities and all eight noise coefficients (q, p against dQ_a, dP_a) at time t.
OperatorIdentityReport verify_operator_identities(const QuantumDilation& d, const FockModel& fock, double t = 0.0);

nlohmann::json to_json(const OperatorIdentityReport& r);

/// Truncated coherent state |alpha>, renormalized on the N levels.
CVector coherent_state(std::size_t n, Complex alpha);
CMatrix density_matrix(const CVector& psi);

struct MasterEquationSample {
    double t = 0.0;
    double trace = 1.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double purity = 1.0;
    double min_eigenvalue = 0.0;
};

struct MasterEquationOptions {
    std::size_t record_every = 1;   // steps between samples (eigenvalues are computed only at samples)
    double positivity_floor = -1e-6;
};

struct MasterEquationResult {
    std::vector<MasterEquationSample> samples;
    CMatrix final_state;
    /// max |tr rho - 1| / T.
    [[nodiscard]] double trace_drift_rate() const;
    [[nodiscard]] double min_eigenvalue() const;
};

/// RK4 on the Schrodinger-picture generator with H_eff = H - (i hbar / 2) sum L* L,
/// symmetrizing rho after every step. Throws TruncationError when the smallest
/// eigenvalue at a sample drops below the positivity floor.
MasterEquationResult master_equation_evolve(const QuantumDilation& d, const CMatrix& rho0, double horizon, double dt,
                                            const MasterEquationOptions& options = {});

void write_master_equation_csv(std::ostream& os, const MasterEquationResult& r);

}  // namespace stochcirc
