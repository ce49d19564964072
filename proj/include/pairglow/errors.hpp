#pragma once

#include <stdexcept>
#include <string>

namespace pairglow {

/// Rejected input: a non-physical constant, an out-of-domain parameter or a
/// malformed configuration document.
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(const std::string& what, int line = 0)
      : std::invalid_argument(what), line_(line)
    {
    }

    /// 1-based line in the source document, 0 when unknown.
    int line() const noexcept { return line_; }

  private:
    int line_;
};

/// A quadrature or root search that did not reach its tolerance.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A structural property of the model was observed to fail
/// (e.g. more than one zero of a concurrence function).
class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// A density matrix handed to a routine does not satisfy the X-state
/// invariants (trace, positivity, exchange symmetry).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

} // namespace pairglow
