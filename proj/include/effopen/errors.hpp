#pragma once

#include <stdexcept>
#include <string>

namespace effopen {

/// Argument outside the mathematical domain of an operation (t <= 1 for theta, negative p, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inputs that are individually valid but mutually inconsistent (e.g. C2 > C1).
class InconsistentInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A gate of an operation failed; `gate()` names it for reporting.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string gate, const std::string& what)
      : std::runtime_error(what), gate_(std::move(gate)) {}
  const std::string& gate() const noexcept { return gate_; }

 private:
  std::string gate_;
};

/// Input the exact path does not handle (off-center points, non-monomial F, n > 2 cones).
class UnsupportedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace effopen
