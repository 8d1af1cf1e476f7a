#pragma once

#include <stdexcept>
#include <string>

namespace hsle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a formula (bad κ, negative discriminant, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Which admissibility inequality a parameter set violated.
enum class Violation {
  kappa_out_of_range,   // κ ∉ (0,4]
  nu_negative,          // ν < 0
  mu_above_bound,       // μ above the b = 0 locus
  beta_below_threshold, // β < (6−κ)/(2κ)
  alpha_above_eta,      // α > η_κ(β)
  negative_discriminant,
  rho_not_above_minus_two,
};

const char* to_string(Violation v);

/// Parameter-range failure naming the violated inequality.
class RangeError : public DomainError {
 public:
  RangeError(Violation v, const std::string& detail)
      : DomainError(std::string(to_string(v)) + ": " + detail), violation_(v) {}

  Violation violation() const noexcept { return violation_; }

 private:
  Violation violation_;
};

/// Argument sits on a pole of the Gamma function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical failure: non-convergence, singular evaluation, path excursions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A series did not reach its tolerance inside the iteration cap.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hsle
