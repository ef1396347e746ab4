#pragma once

// Functions and vector fields on extended phase space (t, q, p).
//
// PhaseFunction is a finite sum of separable terms  c * a(q) * b(p) * e(t)
// built from ScalarFunctions, so partial derivatives stay exact. Every
// Hamiltonian, noise generator and divergence field produced by the dilation
// builders lives in this class.

#include "stochcirc/scalar_function.hpp"
#include "stochcirc/types.hpp"

#include "json.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace stochcirc {

struct SeparableTerm {
    double coefficient = 1.0;
    ScalarFunction in_q;
    ScalarFunction in_p;
    ScalarFunction in_t;
};

class PhaseFunction {
public:
    PhaseFunction() = default;

    static PhaseFunction constant(double c);
    static PhaseFunction of_q(const ScalarFunction& f);
    static PhaseFunction of_p(const ScalarFunction& f);
    static PhaseFunction of_t(const ScalarFunction& f);
    static PhaseFunction q() { return of_q(ScalarFunction::identity(kTimeDomain)); }
    static PhaseFunction p() { return of_p(ScalarFunction::identity(kTimeDomain)); }

    [[nodiscard]] double operator()(double t, double q, double p) const;

    [[nodiscard]] PhaseFunction dq() const;
    [[nodiscard]] PhaseFunction dp() const;
    [[nodiscard]] PhaseFunction dt() const;

    [[nodiscard]] PhaseFunction operator+(const PhaseFunction& other) const;
    [[nodiscard]] PhaseFunction operator-(const PhaseFunction& other) const;
    [[nodiscard]] PhaseFunction operator-() const { return scaled(-1.0); }
    [[nodiscard]] PhaseFunction operator*(const PhaseFunction& other) const;
    [[nodiscard]] PhaseFunction scaled(double factor) const;

    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] bool depends_on_time() const noexcept;
    [[nodiscard]] const std::vector<SeparableTerm>& terms() const noexcept { return terms_; }

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] nlohmann::json to_json() const;

private:
    void add_term(SeparableTerm term);

    std::vector<SeparableTerm> terms_;
};

/// Poisson bracket {f, g} = f_q g_p - f_p g_q.
PhaseFunction poisson_bracket(const PhaseFunction& f, const PhaseFunction& g);

/// A planar time-dependent vector field with a Jacobian. Analytic fields carry
/// PhaseFunction components and exact Jacobians; callable fields use central
/// differences with step 1e-6 * max(1, |x_i|).
class VectorField {
public:
    using Callable = std::function<Vec2(double t, const Vec2& x)>;

    /// The zero field.
    VectorField();

    static VectorField analytic(PhaseFunction q_component, PhaseFunction p_component);
    static VectorField callable(Callable f);
    /// Hamiltonian field J grad(h) = (h_p, -h_q).
    static VectorField hamiltonian(const PhaseFunction& h);

    [[nodiscard]] Vec2 operator()(double t, const Vec2& x) const;
    [[nodiscard]] Mat2 jacobian(double t, const Vec2& x) const;
    /// Trace of the Jacobian.
    [[nodiscard]] double divergence(double t, const Vec2& x) const { return jacobian(t, x).trace(); }

    [[nodiscard]] bool is_analytic() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;
    /// Components of an analytic field; throws std::logic_error for callable fields.
    [[nodiscard]] const PhaseFunction& q_component() const;
    [[nodiscard]] const PhaseFunction& p_component() const;

    [[nodiscard]] VectorField operator+(const VectorField& other) const;
    [[nodiscard]] VectorField scaled(double factor) const;

    class Impl;

private:
    explicit VectorField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Central-difference Jacobian of an arbitrary planar field.
Mat2 finite_difference_jacobian(const VectorField::Callable& f, double t, const Vec2& x);

/// Scalar function of (q, p) with gradient and Hessian, for residual and
/// determinant checks on fields outside the separable class (e.g. exponentials).
struct ScalarField {
    std::function<double(double q, double p)> value;
    std::function<Vec2(double q, double p)> gradient;
    std::function<Mat2(double q, double p)> hessian;

    /// Exact derivatives of a time-independent (or frozen-time) PhaseFunction.
    static ScalarField from(const PhaseFunction& f, double t = 0.0);
    /// Central differences for both gradient and Hessian.
    static ScalarField from_value(std::function<double(double, double)> f);
};

}  // namespace stochcirc
