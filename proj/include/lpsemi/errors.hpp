#pragma once

#include <stdexcept>
#include <string>

namespace lpsemi {

/// Argument outside the domain of an operator or special function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Evaluation at a pole (e.g. Gamma at a non-positive integer).
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A series or iteration failed to meet its tail bound within the
/// configured maximum number of terms.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quadrature error estimate exceeded the requested tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed suite or CLI configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file or inline literal.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lpsemi
