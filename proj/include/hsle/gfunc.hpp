#pragma once

#include "hsle/params.hpp"
#include "hsle/special_fn.hpp"

namespace hsle {

/// Hypergeometric data that determines one G-type function:
/// G(θ) = sin(θ)^{2d} ₂F₁(a,b;c;sin²θ) on (0,π/2), continued to (0,π).
/// c − a − b = 1/2 is assumed throughout.
struct GForm {
  Complex a;
  Complex b;
  double c = 1.0;
  double d = 0.0;
};

/// G and its first two θ-derivatives at one point, plus the size of the
/// imaginary part discarded when the parameters are complex.
struct GJet {
  double g = 0.0;
  double dg = 0.0;
  double d2g = 0.0;
  double imag_residue = 0.0;
  bool imag_flagged = false;
};

/// Imaginary residues above this (relative) are flagged on GJet.
inline constexpr double kGImagFlagTol = 1e-8;

GForm form_of(const Params& p);

/// a, b rebuilt with μ replaced by μ + λ/2; c and d unchanged.
GForm shifted_form(const Params& p, double lambda);

/// Evaluates the jet of a G-type function. θ < π/4 uses the sine form
/// (series in sin²θ ≤ 1/2); θ ≥ π/4 the two-term form in −cot²θ.
GJet g_jet(const GForm& f, double theta);

/// Immutable evaluator for one parameter set.
class GEvaluator {
 public:
  explicit GEvaluator(const Params& p);

  const Params& params() const noexcept { return params_; }
  const GForm& form() const noexcept { return form_; }
  bool b_zero() const noexcept { return b_zero_; }

  GJet jet(double theta) const;

 private:
  Params params_;
  GForm form_;
  bool b_zero_;
};

/// G(θ) for θ ∈ (0,π).
double g_eval(const GEvaluator& ev, double theta);

/// G′(θ)/G(θ); 2d·cot θ when b = 0. Throws NumericalError if |G| < 1e-300.
double g_log_deriv(const GEvaluator& ev, double theta);

/// e − ν/(2 sin²θ) + (G′/G) cot θ / 2 + (κ/8) G″/G.
double ode_residual(const GEvaluator& ev, double theta);

/// Same residual for an arbitrary form with e replaced by e_value.
double ode_residual_form(const GForm& f, double kappa, double nu, double e_value,
                         double theta);

/// Leading behaviour −2C₂(π−θ)^{2d+2−2c} at the π end.
double g_asymptotic_pi(const GEvaluator& ev, double theta);

struct C2Constant {
  double value = 0.0;
  double c1 = 0.0;          // companion constant, equal to −value
  bool pole_zero = false;   // a Gamma pole in the denominator forced 0
  bool infinite = false;    // Γ(c−1) pole (c = 1): no finite value
};

/// The π-end constant C₂(a,b,c) and its companion C₁.
C2Constant c2_constant(Complex a, Complex b, double c);

/// f_λ(θ) = G_λ(θ)/G(θ), G_λ built from shifted_form.
double f_lambda(const GEvaluator& ev, double lambda, double theta);

/// f_λ(π) = C₂(a_λ,b_λ,c)/C₂(a,b,c), computed as a ratio of reciprocal
/// Gamma products so that it stays finite at c = 1.
double f_lambda_at_pi(const GEvaluator& ev, double lambda);

/// Density of the natural scale, sin(θ)^{−4/κ} G(θ)^{−2}.
double natural_scale_density(const GEvaluator& ev, double theta);

}  // namespace hsle
