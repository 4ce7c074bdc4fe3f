#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace twm {

/// An input violates an operation's precondition (bad modulus, coprimality, pole, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request is valid but exceeds what the current tables or budgets can serve.
class CapabilityError : public std::runtime_error {
 public:
  CapabilityError(const std::string& what, std::uint64_t required = 0)
      : std::runtime_error(what), required_(required) {}

  /// Depth (coefficient index, support size, ...) that would have been needed; 0 if unknown.
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Numerical procedure failed its own convergence certificate.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twm
