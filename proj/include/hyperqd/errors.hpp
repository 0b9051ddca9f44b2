#pragma once

#include <stdexcept>
#include <string>

namespace hyperqd {

/// Caller-supplied data violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters for which the steady-state coefficients are undefined.
class SingularParametersError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A measurement or normalization was requested on a zero-norm state.
class ZeroNormError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fidelity formula denominator vanished.
class DegenerateCoefficientsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal wiring does not satisfy its ideal-limit contract.
class ConfigurationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hyperqd
