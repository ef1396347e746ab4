#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochcirc {

/// Evaluation outside a function's declared interval, or a state leaving the
/// supported region.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A characteristic that violates passivity (negative R or M, non-monotone K').
class PassivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested operation cannot be expressed in the closed-form function algebra.
class NotRepresentableError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Model is outside the class a construction supports (non-series, non-constant L, ...).
class UnsupportedModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected = {});

    [[nodiscard]] const SourceSpan& span() const noexcept { return span_; }
    [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }
    [[nodiscard]] const std::string& bare_message() const noexcept { return bare_; }

private:
    std::string bare_;
    SourceSpan span_;
    std::vector<std::string> expected_;
};

/// A stepper produced a non-finite state.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& message, std::size_t step, std::ptrdiff_t path = -1);

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] std::ptrdiff_t path() const noexcept { return path_; }

private:
    std::size_t step_;
    std::ptrdiff_t path_;
};

/// Master-equation evolution lost positivity beyond tolerance; the Fock cutoff is too small.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stochcirc
