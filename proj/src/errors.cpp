#include "stochcirc/errors.hpp"

#include <sstream>

namespace stochcirc {

ParseError::ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << span.line << ":" << span.column << ": " << message;
          if (!expected.empty()) {
              os << " (expected one of:";
              for (const auto& e : expected) os << " " << e;
              os << ")";
          }
          return os.str();
      }()),
      bare_(message),
      span_(span),
      expected_(std::move(expected)) {}

IntegrationError::IntegrationError(const std::string& message, std::size_t step, std::ptrdiff_t path)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << message << " at step " << step;
          if (path >= 0) os << " on path " << path;
          return os.str();
      }()),
      step_(step),
      path_(path) {}

}  // namespace stochcirc
