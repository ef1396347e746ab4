#pragma once

// =============================================================================
// ScalarFunction - one-variable closed-form functions with exact calculus
// =============================================================================
// A function is a polynomial part plus a finite sum of sinusoids
//     f(x) = sum_k c_k x^k + sum_j A_j sin(w_j x + phi_j)
// restricted to a closed interval. The class is closed under differentiation
// and under antiderivatives normalized to vanish at the origin, which is all
// the circuit characteristics and drives need.
// =============================================================================

#include <span>
#include <string>
#include <vector>

namespace stochcirc {

struct Interval {
    double lo = -1.0e3;
    double hi = 1.0e3;

    [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr Interval kDefaultDomain{-1.0e3, 1.0e3};
/// Domain used for drives e(t).
inline constexpr Interval kTimeDomain{-1.0e12, 1.0e12};

struct Sinusoid {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

class ScalarFunction {
public:
    /// The zero function on the default domain.
    ScalarFunction() = default;

    static ScalarFunction zero(Interval domain = kDefaultDomain);
    static ScalarFunction constant(double value, Interval domain = kDefaultDomain);
    /// Ascending-power coefficients: c0 + c1 x + c2 x^2 + ...
    static ScalarFunction polynomial(std::vector<double> coefficients, Interval domain = kDefaultDomain);
    static ScalarFunction sinusoid(double amplitude, double omega, double phase,
                                   Interval domain = kDefaultDomain);
    static ScalarFunction identity(Interval domain = kDefaultDomain) { return polynomial({0.0, 1.0}, domain); }

    /// Evaluates f(x); throws DomainError outside the declared interval.
    [[nodiscard]] double operator()(double x) const;
    /// Evaluates the analytic expression without the domain check.
    [[nodiscard]] double evaluate_unchecked(double x) const noexcept;

    [[nodiscard]] ScalarFunction derivative() const;
    /// Antiderivative F with F(0) = 0.
    [[nodiscard]] ScalarFunction antiderivative() const;

    [[nodiscard]] ScalarFunction operator+(const ScalarFunction& other) const;
    [[nodiscard]] ScalarFunction operator-(const ScalarFunction& other) const;
    [[nodiscard]] ScalarFunction operator-() const { return scaled(-1.0); }
    [[nodiscard]] ScalarFunction scaled(double factor) const;
    /// Product; throws NotRepresentableError when a sinusoid meets a non-constant factor.
    [[nodiscard]] ScalarFunction operator*(const ScalarFunction& other) const;
    /// x -> f(s x); the domain is mapped accordingly.
    [[nodiscard]] ScalarFunction with_scaled_argument(double s) const;

    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_polynomial() const noexcept { return sines_.empty(); }
    [[nodiscard]] bool is_constant() const noexcept { return sines_.empty() && coeffs_.size() <= 1; }
    /// Highest power with a nonzero coefficient; -1 for a zero polynomial part.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] double constant_value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.front(); }

    [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] std::span<const Sinusoid> sinusoids() const noexcept { return sines_; }
    [[nodiscard]] const Interval& domain() const noexcept { return domain_; }
    [[nodiscard]] ScalarFunction with_domain(Interval domain) const;

    /// Human-readable form in the given variable, e.g. "0.2 + 0.6*I^2".
    [[nodiscard]] std::string to_string(const std::string& var = "x") const;

    friend bool operator==(const ScalarFunction&, const ScalarFunction&) = default;

private:
    void normalize();

    std::vector<double> coeffs_;
    std::vector<Sinusoid> sines_;
    Interval domain_ = kDefaultDomain;
};

}  // namespace stochcirc
