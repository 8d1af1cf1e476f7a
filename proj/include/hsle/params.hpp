#pragma once

#include "hsle/special_fn.hpp"

namespace hsle {

/// hSLE parameters (κ, μ, ν) together with the derived hypergeometric
/// constants. q1, a and b become complex conjugates when
/// 16κμ + (4−κ)² < 0; c, d, e, q2 are always real.
struct Params {
  double kappa = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  Complex q1;
  double q2 = 0.0;
  Complex a;
  Complex b;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

/// Restriction exponents (α, β).
struct ExponentPair {
  double alpha = 0.0;
  double beta = 0.0;
};

struct MuNu {
  double mu = 0.0;
  double nu = 0.0;
};

/// (6−κ)(3κ−8)/(2κ). Throws RangeError outside κ ∈ (0,4].
double central_charge(double kappa);

/// √(16κμ + (4−κ)²)/(2κ), imaginary when the radicand is negative.
Complex q1_of(double kappa, double mu);

/// √(16κν + (4−κ)²)/(4κ).
double q2_of(double kappa, double nu);

/// μ on which b vanishes for the given κ and ν; the admissible range is
/// μ at or below this value.
double mu_upper_bound(double kappa, double nu);

/// Builds Params, checking κ ∈ (0,4], ν ≥ 0 and μ ≤ mu_upper_bound.
/// A b within 1e-12 of zero is snapped to exactly zero (and a = c − 1/2).
Params make_params(double kappa, double mu, double nu);

/// α = 2μ, β = 1/κ + ν + 2q2.
ExponentPair exponents_from_mu_nu(const Params& p);

/// Inverse of exponents_from_mu_nu. Throws RangeError when β < (6−κ)/(2κ).
MuNu mu_nu_from_exponents(double kappa, const ExponentPair& ep);

/// Params from (α, β), also checking α ≤ η_κ(β) through the μ bound.
Params params_from_exponents(double kappa, const ExponentPair& ep);

/// Lower end of the admissible β range, (6−κ)/(2κ).
double beta_min(double kappa);

/// V_κ(x) = √(16κx + (4−κ)²) − (4−κ) and its inverse (x² + 2(4−κ)x)/(16κ).
double v_kappa(double kappa, double x);
double v_kappa_inv(double kappa, double x);

/// (ρ+2)(ρ+6−κ)/(4κ) for ρ > −2.
double chordal_alpha(double kappa, double rho);

/// True when a and b are real to within tol.
bool has_real_ab(const Params& p, double tol = 0.0);

}  // namespace hsle
