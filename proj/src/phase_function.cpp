#include "stochcirc/phase_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stochcirc {

namespace {

const ScalarFunction& unit() {
    static const ScalarFunction one = ScalarFunction::constant(1.0, kTimeDomain);
    return one;
}

// Constant factors are folded into the coefficient so equal terms can merge.
void fold_constant(double& coefficient, ScalarFunction& factor) {
    if (factor.is_constant()) {
        coefficient *= factor.constant_value();
        factor = unit();
    }
}

}  // namespace

PhaseFunction PhaseFunction::constant(double c) {
    PhaseFunction f;
    f.add_term({c, unit(), unit(), unit()});
    return f;
}

PhaseFunction PhaseFunction::of_q(const ScalarFunction& g) {
    PhaseFunction f;
    f.add_term({1.0, g, unit(), unit()});
    return f;
}

PhaseFunction PhaseFunction::of_p(const ScalarFunction& g) {
    PhaseFunction f;
    f.add_term({1.0, unit(), g, unit()});
    return f;
}

PhaseFunction PhaseFunction::of_t(const ScalarFunction& g) {
    PhaseFunction f;
    f.add_term({1.0, unit(), unit(), g});
    return f;
}

void PhaseFunction::add_term(SeparableTerm term) {
    fold_constant(term.coefficient, term.in_q);
    fold_constant(term.coefficient, term.in_p);
    fold_constant(term.coefficient, term.in_t);
    if (term.coefficient == 0.0 || term.in_q.is_zero() || term.in_p.is_zero() || term.in_t.is_zero()) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->in_q == term.in_q && it->in_p == term.in_p && it->in_t == term.in_t) {
            it->coefficient += term.coefficient;
            if (it->coefficient == 0.0) terms_.erase(it);
            return;
        }
    }
    terms_.push_back(std::move(term));
}

double PhaseFunction::operator()(double t, double q, double p) const {
    double acc = 0.0;
    for (const auto& term : terms_) acc += term.coefficient * term.in_q(q) * term.in_p(p) * term.in_t(t);
    return acc;
}

PhaseFunction PhaseFunction::dq() const {
    PhaseFunction d;
    for (const auto& term : terms_) d.add_term({term.coefficient, term.in_q.derivative(), term.in_p, term.in_t});
    return d;
}

PhaseFunction PhaseFunction::dp() const {
    PhaseFunction d;
    for (const auto& term : terms_) d.add_term({term.coefficient, term.in_q, term.in_p.derivative(), term.in_t});
    return d;
}

PhaseFunction PhaseFunction::dt() const {
    PhaseFunction d;
    for (const auto& term : terms_) d.add_term({term.coefficient, term.in_q, term.in_p, term.in_t.derivative()});
    return d;
}

PhaseFunction PhaseFunction::operator+(const PhaseFunction& other) const {
    PhaseFunction s = *this;
    for (const auto& term : other.terms_) s.add_term(term);
    return s;
}

PhaseFunction PhaseFunction::operator-(const PhaseFunction& other) const { return *this + other.scaled(-1.0); }

PhaseFunction PhaseFunction::operator*(const PhaseFunction& other) const {
    PhaseFunction out;
    for (const auto& a : terms_) {
        for (const auto& b : other.terms_) {
            out.add_term({a.coefficient * b.coefficient, a.in_q * b.in_q, a.in_p * b.in_p, a.in_t * b.in_t});
        }
    }
    return out;
}

PhaseFunction PhaseFunction::scaled(double factor) const {
    PhaseFunction out;
    for (auto term : terms_) {
        term.coefficient *= factor;
        out.add_term(std::move(term));
    }
    return out;
}

bool PhaseFunction::depends_on_time() const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [](const SeparableTerm& t) { return !t.in_t.is_constant(); });
}

std::string PhaseFunction::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(12);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto& t = terms_[k];
        if (k) os << " + ";
        os << t.coefficient;
        if (!t.in_q.is_constant()) os << "*(" << t.in_q.to_string("q") << ")";
        if (!t.in_p.is_constant()) os << "*(" << t.in_p.to_string("p") << ")";
        if (!t.in_t.is_constant()) os << "*(" << t.in_t.to_string("t") << ")";
    }
    return os.str();
}

nlohmann::json PhaseFunction::to_json() const {
    auto factor = [](const ScalarFunction& f) {
        nlohmann::json sines = nlohmann::json::array();
        for (const auto& s : f.sinusoids()) sines.push_back({{"amp", s.amplitude}, {"omega", s.omega}, {"phase", s.phase}});
        return nlohmann::json{{"coefficients", std::vector<double>(f.coefficients().begin(), f.coefficients().end())},
                              {"sinusoids", sines}};
    };
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) {
        terms.push_back({{"coefficient", t.coefficient}, {"q", factor(t.in_q)}, {"p", factor(t.in_p)}, {"t", factor(t.in_t)}});
    }
    return {{"terms", terms}, {"text", to_string()}};
}

PhaseFunction poisson_bracket(const PhaseFunction& f, const PhaseFunction& g) {
    return f.dq() * g.dp() - f.dp() * g.dq();
}

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

class VectorField::Impl {
public:
    virtual ~Impl() = default;
    [[nodiscard]] virtual Vec2 value(double t, const Vec2& x) const = 0;
    [[nodiscard]] virtual Mat2 jacobian(double t, const Vec2& x) const = 0;
};

namespace {

class AnalyticField final : public VectorField::Impl {
public:
    AnalyticField(PhaseFunction fq, PhaseFunction fp)
        : fq_(std::move(fq)), fp_(std::move(fp)), fq_q_(fq_.dq()), fq_p_(fq_.dp()), fp_q_(fp_.dq()), fp_p_(fp_.dp()) {}

    Vec2 value(double t, const Vec2& x) const override { return {fq_(t, x(0), x(1)), fp_(t, x(0), x(1))}; }

    Mat2 jacobian(double t, const Vec2& x) const override {
        Mat2 j;
        j << fq_q_(t, x(0), x(1)), fq_p_(t, x(0), x(1)), fp_q_(t, x(0), x(1)), fp_p_(t, x(0), x(1));
        return j;
    }

    PhaseFunction fq_, fp_;
    PhaseFunction fq_q_, fq_p_, fp_q_, fp_p_;
};

class CallableField final : public VectorField::Impl {
public:
    explicit CallableField(VectorField::Callable f) : f_(std::move(f)) {}
    Vec2 value(double t, const Vec2& x) const override { return f_(t, x); }
    Mat2 jacobian(double t, const Vec2& x) const override { return finite_difference_jacobian(f_, t, x); }

private:
    VectorField::Callable f_;
};

}  // namespace

Mat2 finite_difference_jacobian(const VectorField::Callable& f, double t, const Vec2& x) {
    Mat2 j;
    for (int c = 0; c < 2; ++c) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(c)));
        Vec2 plus = x;
        Vec2 minus = x;
        plus(c) += h;
        minus(c) -= h;
        j.col(c) = (f(t, plus) - f(t, minus)) / (2.0 * h);
    }
    return j;
}

VectorField::VectorField() : impl_(std::make_shared<AnalyticField>(PhaseFunction{}, PhaseFunction{})) {}

VectorField VectorField::analytic(PhaseFunction q_component, PhaseFunction p_component) {
    return VectorField(std::make_shared<AnalyticField>(std::move(q_component), std::move(p_component)));
}

VectorField VectorField::callable(Callable f) { return VectorField(std::make_shared<CallableField>(std::move(f))); }

VectorField VectorField::hamiltonian(const PhaseFunction& h) { return analytic(h.dp(), -h.dq()); }

Vec2 VectorField::operator()(double t, const Vec2& x) const { return impl_->value(t, x); }

Mat2 VectorField::jacobian(double t, const Vec2& x) const { return impl_->jacobian(t, x); }

bool VectorField::is_analytic() const noexcept { return dynamic_cast<const AnalyticField*>(impl_.get()) != nullptr; }

bool VectorField::is_zero() const noexcept {
    const auto* a = dynamic_cast<const AnalyticField*>(impl_.get());
    return a && a->fq_.is_zero() && a->fp_.is_zero();
}

const PhaseFunction& VectorField::q_component() const {
    const auto* a = dynamic_cast<const AnalyticField*>(impl_.get());
    if (!a) throw std::logic_error("vector field has no analytic components");
    return a->fq_;
}

const PhaseFunction& VectorField::p_component() const {
    const auto* a = dynamic_cast<const AnalyticField*>(impl_.get());
    if (!a) throw std::logic_error("vector field has no analytic components");
    return a->fp_;
}

VectorField VectorField::operator+(const VectorField& other) const {
    if (is_analytic() && other.is_analytic()) {
        return analytic(q_component() + other.q_component(), p_component() + other.p_component());
    }
    auto a = impl_;
    auto b = other.impl_;
    return callable([a, b](double t, const Vec2& x) -> Vec2 { return a->value(t, x) + b->value(t, x); });
}

VectorField VectorField::scaled(double factor) const {
    if (is_analytic()) return analytic(q_component().scaled(factor), p_component().scaled(factor));
    auto a = impl_;
    return callable([a, factor](double t, const Vec2& x) -> Vec2 { return factor * a->value(t, x); });
}

// ---------------------------------------------------------------------------

ScalarField ScalarField::from(const PhaseFunction& f, double t) {
    const PhaseFunction fq = f.dq();
    const PhaseFunction fp = f.dp();
    const PhaseFunction fqq = fq.dq();
    const PhaseFunction fqp = fq.dp();
    const PhaseFunction fpp = fp.dp();
    ScalarField s;
    s.value = [f, t](double q, double p) { return f(t, q, p); };
    s.gradient = [fq, fp, t](double q, double p) { return Vec2(fq(t, q, p), fp(t, q, p)); };
    s.hessian = [fqq, fqp, fpp, t](double q, double p) {
        Mat2 h;
        const double m = fqp(t, q, p);
        h << fqq(t, q, p), m, m, fpp(t, q, p);
        return h;
    };
    return s;
}

ScalarField ScalarField::from_value(std::function<double(double, double)> f) {
    ScalarField s;
    s.value = f;
    s.gradient = [f](double q, double p) {
        const double hq = 1e-6 * std::max(1.0, std::abs(q));
        const double hp = 1e-6 * std::max(1.0, std::abs(p));
        return Vec2((f(q + hq, p) - f(q - hq, p)) / (2 * hq), (f(q, p + hp) - f(q, p - hp)) / (2 * hp));
    };
    s.hessian = [f](double q, double p) {
        // Larger step: second differences lose half the digits.
        const double hq = 1e-4 * std::max(1.0, std::abs(q));
        const double hp = 1e-4 * std::max(1.0, std::abs(p));
        const double c = f(q, p);
        Mat2 h;
        h(0, 0) = (f(q + hq, p) - 2 * c + f(q - hq, p)) / (hq * hq);
        h(1, 1) = (f(q, p + hp) - 2 * c + f(q, p - hp)) / (hp * hp);
        h(0, 1) = h(1, 0) =
            (f(q + hq, p + hp) - f(q + hq, p - hp) - f(q - hq, p + hp) + f(q - hq, p - hp)) / (4 * hq * hp);
        return h;
    };
    return s;
}

}  // namespace stochcirc
