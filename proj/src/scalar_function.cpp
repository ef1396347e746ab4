#include "stochcirc/scalar_function.hpp"

#include "stochcirc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stochcirc {

namespace {

Interval intersect(const Interval& a, const Interval& b) {
    Interval out{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (out.lo > out.hi) {
        throw DomainError("function domains do not overlap");
    }
    return out;
}

}  // namespace

ScalarFunction ScalarFunction::zero(Interval domain) {
    ScalarFunction f;
    f.domain_ = domain;
    return f;
}

ScalarFunction ScalarFunction::constant(double value, Interval domain) {
    return polynomial({value}, domain);
}

ScalarFunction ScalarFunction::polynomial(std::vector<double> coefficients, Interval domain) {
    ScalarFunction f;
    f.coeffs_ = std::move(coefficients);
    f.domain_ = domain;
    f.normalize();
    return f;
}

ScalarFunction ScalarFunction::sinusoid(double amplitude, double omega, double phase, Interval domain) {
    ScalarFunction f;
    f.sines_.push_back({amplitude, omega, phase});
    f.domain_ = domain;
    f.normalize();
    return f;
}

void ScalarFunction::normalize() {
    // Zero-frequency sinusoids are constants.
    for (auto it = sines_.begin(); it != sines_.end();) {
        if (it->omega == 0.0 || it->amplitude == 0.0) {
            const double c = it->amplitude * std::sin(it->phase);
            if (c != 0.0) {
                if (coeffs_.empty()) coeffs_.push_back(0.0);
                coeffs_[0] += c;
            }
            it = sines_.erase(it);
        } else {
            ++it;
        }
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double ScalarFunction::operator()(double x) const {
    if (!domain_.contains(x)) {
        std::ostringstream os;
        os << "argument " << x << " outside domain [" << domain_.lo << ", " << domain_.hi << "]";
        throw DomainError(os.str());
    }
    return evaluate_unchecked(x);
}

double ScalarFunction::evaluate_unchecked(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    for (const auto& s : sines_) acc += s.amplitude * std::sin(s.omega * x + s.phase);
    return acc;
}

ScalarFunction ScalarFunction::derivative() const {
    ScalarFunction d;
    d.domain_ = domain_;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d.coeffs_.push_back(static_cast<double>(k) * coeffs_[k]);
    for (const auto& s : sines_) {
        d.sines_.push_back({s.amplitude * s.omega, s.omega, s.phase + std::numbers::pi / 2.0});
    }
    d.normalize();
    return d;
}

ScalarFunction ScalarFunction::antiderivative() const {
    ScalarFunction a;
    a.domain_ = domain_;
    a.coeffs_.assign(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) a.coeffs_[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    // int A sin(wx+phi) = -(A/w) cos(wx+phi); shift so the value at 0 vanishes.
    for (const auto& s : sines_) {
        const double r = s.amplitude / s.omega;
        a.sines_.push_back({r, s.omega, s.phase - std::numbers::pi / 2.0});
        a.coeffs_[0] += r * std::cos(s.phase);
    }
    a.normalize();
    return a;
}

ScalarFunction ScalarFunction::operator+(const ScalarFunction& other) const {
    ScalarFunction s;
    s.domain_ = intersect(domain_, other.domain_);
    s.coeffs_.assign(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) s.coeffs_[k] += coeffs_[k];
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) s.coeffs_[k] += other.coeffs_[k];
    s.sines_ = sines_;
    s.sines_.insert(s.sines_.end(), other.sines_.begin(), other.sines_.end());
    s.normalize();
    return s;
}

ScalarFunction ScalarFunction::operator-(const ScalarFunction& other) const {
    return *this + other.scaled(-1.0);
}

ScalarFunction ScalarFunction::scaled(double factor) const {
    ScalarFunction s = *this;
    for (auto& c : s.coeffs_) c *= factor;
    for (auto& sn : s.sines_) sn.amplitude *= factor;
    s.normalize();
    return s;
}

ScalarFunction ScalarFunction::operator*(const ScalarFunction& other) const {
    if (is_zero() || other.is_zero()) return zero(intersect(domain_, other.domain_));
    if (is_constant()) return other.scaled(constant_value()).with_domain(intersect(domain_, other.domain_));
    if (other.is_constant()) return scaled(other.constant_value()).with_domain(intersect(domain_, other.domain_));
    if (!is_polynomial() || !other.is_polynomial()) {
        throw NotRepresentableError("product of a sinusoid with a non-constant function");
    }
    ScalarFunction p;
    p.domain_ = intersect(domain_, other.domain_);
    p.coeffs_.assign(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) p.coeffs_[i + j] += coeffs_[i] * other.coeffs_[j];
    p.normalize();
    return p;
}

ScalarFunction ScalarFunction::with_scaled_argument(double s) const {
    if (s == 0.0) return constant(evaluate_unchecked(0.0), domain_);
    ScalarFunction out = *this;
    double power = 1.0;
    for (auto& c : out.coeffs_) {
        c *= power;
        power *= s;
    }
    for (auto& sn : out.sines_) sn.omega *= s;
    const double a = domain_.lo / s;
    const double b = domain_.hi / s;
    out.domain_ = {std::min(a, b), std::max(a, b)};
    out.normalize();
    return out;
}

bool ScalarFunction::is_zero() const noexcept { return coeffs_.empty() && sines_.empty(); }

ScalarFunction ScalarFunction::with_domain(Interval domain) const {
    ScalarFunction out = *this;
    out.domain_ = domain;
    return out;
}

std::string ScalarFunction::to_string(const std::string& var) const {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0.0) continue;
        if (!first) os << " + ";
        os << coeffs_[k];
        if (k >= 1) os << "*" << var;
        if (k >= 2) os << "^" << k;
        first = false;
    }
    for (const auto& s : sines_) {
        if (!first) os << " + ";
        os << s.amplitude << "*sin(" << s.omega << "*" << var << " + " << s.phase << ")";
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace stochcirc
