#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdelab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Monte Carlo run that cannot produce a trustworthy estimate
/// (too many diverged paths, failed factorization, ...).
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance factorization failed even after diagonal jitter.
class FactorizationError : public RunFailure {
 public:
  FactorizationError(const std::string& what, double jitter)
      : RunFailure(what), jitter_(jitter) {}
  double jitter() const noexcept { return jitter_; }

 private:
  double jitter_;
};

/// Invalid configuration (CLI / presets).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sdelab
