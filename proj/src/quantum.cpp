#include "stochcirc/quantum.hpp"

#include "stochcirc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace stochcirc {

namespace {

constexpr Complex kI{0.0, 1.0};

CMatrix commutator(const CMatrix& x, const CMatrix& y) { return x * y - y * x; }

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

double evaluate_unchecked(const PhaseFunction& f, double q, double p) {
    double v = 0.0;
    for (const auto& term : f.terms())
        v += term.coefficient * term.in_q.evaluate_unchecked(q) * term.in_p.evaluate_unchecked(p) *
             term.in_t.evaluate_unchecked(0.0);
    return v;
}

}  // namespace

CMatrix ladder_operator(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ladder dimension must be at least 1");
    CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k)
        a(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = std::sqrt(static_cast<double>(k));
    return a;
}

FockModel fock_model(std::size_t n, std::size_t margin, double hbar, double inductance, double capacitance) {
    if (n < 8) throw std::invalid_argument("Fock dimension must be at least 8");
    if (margin < 1 || 2 * margin >= n) throw std::invalid_argument("margin must satisfy 1 <= m < N/2");
    if (!(hbar > 0.0) || !(inductance > 0.0) || !(capacitance > 0.0))
        throw std::invalid_argument("hbar, L0 and C0 must be positive");
    FockModel m;
    m.dimension = n;
    m.margin = margin;
    m.hbar = hbar;
    m.inductance = inductance;
    m.capacitance = capacitance;
    m.omega0 = resonant_frequency(inductance, capacitance);
    m.a = ladder_operator(n);
    m.a_dag = m.a.adjoint();
    m.number = m.a_dag * m.a;
    m.q = std::sqrt(hbar * m.omega0 * capacitance / 2.0) * (m.a + m.a_dag);
    m.p = kI * std::sqrt(hbar * m.omega0 * inductance / 2.0) * (m.a_dag - m.a);
    return m;
}

FockModel fock_model(std::size_t n) { return fock_model(n, std::max<std::size_t>(1, n / 4)); }

double hermiticity_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

CMatrix operator_function(const CMatrix& a, const std::function<double(double)>& phi) {
    if (hermiticity_defect(a) >= 1e-12) throw std::invalid_argument("operator_function requires a Hermitian matrix");
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd values = es.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = phi(values(i));
    return es.eigenvectors() * values.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix operator_function(const CMatrix& a, const ScalarFunction& phi) {
    return operator_function(a, [&phi](double x) { return phi.evaluate_unchecked(x); });
}

CMatrix symmetrized(const CMatrix& x, const CMatrix& y) { return 0.5 * (x * y + y * x); }

CMatrix QuantumDilation::hamiltonian(double t) const {
    const double e = drive.is_zero() ? 0.0 : drive(t);
    return e == 0.0 ? h_static : CMatrix(h_static - e * q);
}

QuantumDilation build_quantum_dilation(const PhaseSpaceModel& model, const FockModel& fock) {
    if (!model.is_series()) throw UnsupportedModelError("quantum dilation: parallel dissipators are not supported");
    const auto l0 = model.constant_inductance();
    if (!l0) throw UnsupportedModelError("quantum dilation: requires a constant inductance L0");
    const auto& psi = model.resistor_voltage_function().closed_form();
    if (!psi || !psi->is_polynomial()) throw UnsupportedModelError("quantum dilation: Psi_R' must be a polynomial in p");
    if (!model.memristance().is_polynomial()) throw UnsupportedModelError("quantum dilation: M must be a polynomial");
    if (!model.capacitor_force().is_polynomial())
        throw UnsupportedModelError("quantum dilation: Phi_C' must be a polynomial");
    if (std::abs(*l0 - fock.inductance) > 1e-12 * *l0)
        throw std::invalid_argument("Fock model inductance differs from the circuit inductance");

    QuantumDilation d;
    d.inductance = *l0;
    d.hbar = fock.hbar;
    d.resistor_voltage = *psi;
    d.memristance = model.memristance();
    d.capacitor_force = model.capacitor_force();
    d.drive = model.drive();
    d.f = psi->scaled(0.5);
    d.g = model.memristance().scaled(1.0 / (2.0 * *l0)).antiderivative();
    d.q = fock.q;
    d.p = fock.p;

    const CMatrix f_p = operator_function(fock.p, d.f);
    const CMatrix g_q = operator_function(fock.q, d.g);
    d.h0_static = fock.p * fock.p / (2.0 * *l0) + operator_function(fock.q, model.capacitor_potential());
    d.k = symmetrized(f_p, fock.q) + symmetrized(fock.p, g_q);
    d.h_static = d.h0_static + d.k;
    d.l1 = fock.q + (kI / fock.hbar) * f_p;
    d.l2 = g_q / fock.hbar + kI * fock.p;
    return d;
}

std::vector<CMatrix> couplings_from_symplectic(const SymplecticDilation& d, const FockModel& fock) {
    if (d.f.size() != 2 || d.g.size() != 2) throw std::invalid_argument("expected two symplectic pairs");
    auto lift_q = [&](const PhaseFunction& fn) {
        return operator_function(fock.q, [&fn](double x) { return evaluate_unchecked(fn, x, 0.0); });
    };
    auto lift_p = [&](const PhaseFunction& fn) {
        return operator_function(fock.p, [&fn](double x) { return evaluate_unchecked(fn, 0.0, x); });
    };
    for (std::size_t a = 0; a < 2; ++a) {
        if (!d.f[a].dq().is_zero()) throw std::invalid_argument("F_a must depend on p only");
        if (!d.g[a].dp().is_zero()) throw std::invalid_argument("G_a must depend on q only");
    }
    const double hbar = fock.hbar;
    return {CMatrix(-lift_q(d.g[0]) + (kI / hbar) * lift_p(d.f[0])),
            CMatrix(-lift_q(d.g[1]) / hbar + kI * lift_p(d.f[1]))};
}

CMatrix lindblad_heisenberg(const CMatrix& h, const std::vector<CMatrix>& couplings, const CMatrix& x, double hbar) {
    if (h.rows() != x.rows() || h.cols() != x.cols()) throw std::invalid_argument("dimension mismatch");
    CMatrix out = commutator(x, h) / (kI * hbar);
    for (const auto& l : couplings) {
        if (l.rows() != x.rows() || l.cols() != x.cols()) throw std::invalid_argument("dimension mismatch");
        const CMatrix ld = l.adjoint();
        out += 0.5 * commutator(ld, x) * l + 0.5 * ld * commutator(x, l);
    }
    return out;
}

CMatrix lindblad_schrodinger(const CMatrix& h, const std::vector<CMatrix>& couplings, const CMatrix& rho,
                             double hbar) {
    if (h.rows() != rho.rows() || h.cols() != rho.cols()) throw std::invalid_argument("dimension mismatch");
    CMatrix out = (-kI / hbar) * commutator(h, rho);
    for (const auto& l : couplings) {
        if (l.rows() != rho.rows() || l.cols() != rho.cols()) throw std::invalid_argument("dimension mismatch");
        const CMatrix ld = l.adjoint();
        const CMatrix ldl = ld * l;
        out += l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

CMatrix noise_coefficient_q(const CMatrix& x, const CMatrix& l) {
    return 0.5 * (commutator(x, l) + commutator(l.adjoint(), x));
}

CMatrix noise_coefficient_p(const CMatrix& x, const CMatrix& l) {
    return 0.5 * (-kI * commutator(x, l) + kI * commutator(l.adjoint(), x));
}

double OperatorIdentityReport::max_noise_residual() const {
    double m = 0.0;
    for (const auto& c : noise) m = std::max(m, c.residual);
    return m;
}

OperatorIdentityReport verify_operator_identities(const QuantumDilation& d, const FockModel& fock, double t) {
    OperatorIdentityReport r;
    r.dimension = fock.dimension;
    r.margin = fock.margin;
    const CMatrix h = d.hamiltonian(t);
    r.hamiltonian_hermiticity = hermiticity_defect(h);
    const auto ls = d.couplings();

    const CMatrix lq = lindblad_heisenberg(h, ls, fock.q, fock.hbar);
    const CMatrix lp = lindblad_heisenberg(h, ls, fock.p, fock.hbar);
    const CMatrix vq = fock.p / d.inductance;
    const CMatrix m_q = operator_function(fock.q, d.memristance);
    const double e = d.drive.is_zero() ? 0.0 : d.drive(t);
    const CMatrix vp = -operator_function(fock.q, d.capacitor_force) - operator_function(fock.p, d.resistor_voltage) -
                       (m_q * fock.p + fock.p * m_q) / (2.0 * d.inductance) + e * fock.identity();
    r.drift_q_rel = relative(fock.interior_norm(lq - vq), fock.interior_norm(lq));
    r.drift_p_rel = relative(fock.interior_norm(lp - vp), fock.interior_norm(lp));

    const CMatrix zero = CMatrix::Zero(fock.q.rows(), fock.q.cols());
    const CMatrix f_prime = operator_function(fock.p, d.f.derivative());
    const CMatrix g_prime = operator_function(fock.q, d.g.derivative());
    const CMatrix hbar_id = fock.hbar * fock.identity();
    struct Expect {
        const char* name;
        CMatrix actual;
        CMatrix expected;
    };
    const std::vector<Expect> checks = {
        {"q.dQ1", noise_coefficient_q(fock.q, d.l1), -f_prime},
        {"q.dP1", noise_coefficient_p(fock.q, d.l1), zero},
        {"q.dQ2", noise_coefficient_q(fock.q, d.l2), -hbar_id},
        {"q.dP2", noise_coefficient_p(fock.q, d.l2), zero},
        {"p.dQ1", noise_coefficient_q(fock.p, d.l1), zero},
        {"p.dP1", noise_coefficient_p(fock.p, d.l1), -hbar_id},
        {"p.dQ2", noise_coefficient_q(fock.p, d.l2), zero},
        {"p.dP2", noise_coefficient_p(fock.p, d.l2), -g_prime},
    };
    for (const auto& c : checks)
        r.noise.push_back({c.name, relative(fock.interior_norm(c.actual - c.expected), fock.interior_norm(c.expected))});
    return r;
}

nlohmann::json to_json(const OperatorIdentityReport& r) {
    nlohmann::json noise = nlohmann::json::object();
    for (const auto& c : r.noise) noise[c.name] = c.residual;
    return {{"N", r.dimension},
            {"margin", r.margin},
            {"drift_q_relative", r.drift_q_rel},
            {"drift_p_relative", r.drift_p_rel},
            {"noise_coefficients", noise},
            {"hamiltonian_hermiticity", r.hamiltonian_hermiticity}};
}

CVector coherent_state(std::size_t n, Complex alpha) {
    if (n == 0) throw std::invalid_argument("dimension must be at least 1");
    CVector psi(static_cast<Eigen::Index>(n));
    Complex c = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) c *= alpha / std::sqrt(static_cast<double>(k));
        psi(static_cast<Eigen::Index>(k)) = c;
    }
    return psi / psi.norm();
}

CMatrix density_matrix(const CVector& psi) { return psi * psi.adjoint(); }

double MasterEquationResult::trace_drift_rate() const {
    if (samples.empty()) return 0.0;
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(s.trace - 1.0));
    const double horizon = samples.back().t - samples.front().t;
    return horizon > 0.0 ? worst / horizon : worst;
}

double MasterEquationResult::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::min(m, s.min_eigenvalue);
    return m;
}

namespace {

MasterEquationSample sample(double t, const CMatrix& rho, const QuantumDilation& d) {
    MasterEquationSample s;
    s.t = t;
    s.trace = rho.trace().real();
    s.mean_q = (d.q * rho).trace().real();
    s.mean_p = (d.p * rho).trace().real();
    s.purity = (rho * rho).trace().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    s.min_eigenvalue = es.eigenvalues().minCoeff();
    return s;
}

}  // namespace

MasterEquationResult master_equation_evolve(const QuantumDilation& d, const CMatrix& rho0, double horizon, double dt,
                                            const MasterEquationOptions& options) {
    if (rho0.rows() != d.q.rows() || rho0.cols() != d.q.cols()) throw std::invalid_argument("state dimension mismatch");
    if (hermiticity_defect(rho0) >= 1e-12) throw std::invalid_argument("initial state is not Hermitian");
    if (std::abs(rho0.trace() - Complex(1.0)) > 1e-12) throw std::invalid_argument("initial state must have unit trace");
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho0, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-12) throw std::invalid_argument("initial state is not positive semidefinite");
    }
    if (!(dt > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("dt must be positive and the horizon non-negative");
    if (options.record_every == 0) throw std::invalid_argument("record_every must be at least 1");

    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    CMatrix lsum = CMatrix::Zero(rho0.rows(), rho0.cols());
    for (const auto& l : d.couplings()) lsum += l.adjoint() * l;
    const bool driven = !d.drive.is_zero();
    auto heff_at = [&](double t) -> CMatrix { return d.hamiltonian(t) - (0.5 * kI * d.hbar) * lsum; };
    const CMatrix heff_static = heff_at(0.0);
    const auto ls = d.couplings();
    std::vector<CMatrix> lds;
    for (const auto& l : ls) lds.push_back(l.adjoint());

    auto rhs = [&](double t, const CMatrix& rho) -> CMatrix {
        const CMatrix heff = driven ? heff_at(t) : heff_static;
        const CMatrix hr = heff * rho;
        CMatrix out = (-kI / d.hbar) * (hr - rho * heff.adjoint());
        for (std::size_t a = 0; a < ls.size(); ++a) out += ls[a] * rho * lds[a];
        return out;
    };

    MasterEquationResult res;
    CMatrix rho = rho0;
    res.samples.push_back(sample(0.0, rho, d));
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const CMatrix k1 = rhs(t, rho);
        const CMatrix k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1);
        const CMatrix k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2);
        const CMatrix k4 = rhs(t + dt, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (!rho.allFinite()) throw IntegrationError("master equation produced a non-finite state", k);
        if ((k + 1) % options.record_every == 0 || k + 1 == steps) {
            res.samples.push_back(sample(static_cast<double>(k + 1) * dt, rho, d));
            if (res.samples.back().min_eigenvalue < options.positivity_floor)
                throw TruncationError("density matrix lost positivity at t = " + std::to_string(res.samples.back().t) +
                                      "; increase the Fock dimension");
        }
    }
    res.final_state = rho;
    return res;
}

void write_master_equation_csv(std::ostream& os, const MasterEquationResult& r) {
    const auto old = os.precision(17);
    os << "t,trace,mean_q,mean_p,purity,min_eigenvalue\n";
    for (const auto& s : r.samples)
        os << s.t << ',' << s.trace << ',' << s.mean_q << ',' << s.mean_p << ',' << s.purity << ',' << s.min_eigenvalue
           << '\n';
    os.precision(old);
}

}  // namespace stochcirc
