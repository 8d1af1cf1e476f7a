#include "hsle/errors.hpp"

namespace hsle {

const char* to_string(Violation v) {
  switch (v) {
    case Violation::kappa_out_of_range:
      return "kappa must lie in (0, 4]";
    case Violation::nu_negative:
      return "nu must be >= 0";
    case Violation::mu_above_bound:
      return "mu exceeds the b >= 0 bound";
    case Violation::beta_below_threshold:
      return "beta must be >= (6-kappa)/(2 kappa)";
    case Violation::alpha_above_eta:
      return "alpha must be <= eta_kappa(beta)";
    case Violation::negative_discriminant:
      return "negative discriminant under a square root";
    case Violation::rho_not_above_minus_two:
      return "rho must be > -2";
  }
  return "unknown violation";
}

}  // namespace hsle
