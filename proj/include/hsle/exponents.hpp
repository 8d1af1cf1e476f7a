#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsle/gfunc.hpp"
#include "hsle/params.hpp"

namespace hsle {

/// Generalized disconnection exponent η_κ(β).
double eta(double kappa, double beta);

/// η^n_κ(α, β): the exponent sequence, η^0_κ(α,β) = η_κ(β) − α.
double eta_n(double kappa, double alpha, double beta, int n);

/// η as a function of the central charge c ≤ 1 instead of κ.
double eta_of_c(double c, double beta);

/// λ_n in terms of (κ, μ, ν).
double lambda_n(const Params& p, int n);

/// First n λ's, λ_0 … λ_{n−1}.
std::vector<double> lambda_sequence(const Params& p, std::size_t n);

struct TruncatedProduct {
  double value = 0.0;
  double rel_remainder = 0.0;  // bound on |a_n/a_n^{(N)} − 1| from the k ≥ N tail
};

/// a_n^{(N)} = Π_{k<N, k≠n} (1 − λ_n/λ_k)^{−1}. The remainder bound uses
/// λ_k ≥ κ(k−n)²/8-type growth of the tail.
/// Throws NumericalError on repeated λ's and DomainError when N > lambdas.size().
TruncatedProduct coeff_a_n(std::span<const double> lambdas, std::size_t n, std::size_t N,
                           double kappa);

/// Truncated eigen-expansion of P(T > t).
struct SpectralExpansion {
  Params params;
  std::vector<double> lambdas;
  std::vector<double> coeffs;
  std::vector<double> coeff_remainders;
  // A few terms past the truncation, only used to size the remainder.
  std::vector<double> tail_lambdas;
  std::vector<double> tail_coeffs;
  std::size_t product_terms = 0;
};

inline constexpr std::size_t kDefaultTruncation = 40;
inline constexpr std::size_t kDefaultProductTerms = 100000;

/// Builds λ_0…λ_{N−1} and the matching a_n. Each a_n is a product over
/// product_terms λ's with a first-order correction for the rest.
/// Requires b ≠ 0 (otherwise λ_0 = 0).
SpectralExpansion build_spectral_expansion(const Params& p,
                                           std::size_t N = kDefaultTruncation,
                                           std::size_t product_terms = kDefaultProductTerms);

struct SeriesValue {
  double value = 0.0;
  double remainder = 0.0;          // estimated size of the omitted terms
  bool truncation_warning = false; // |a_N e^{−λ_N t}| > 1e-9
  bool out_of_range = false;       // value outside [−remainder, 1 + remainder]
};

/// Σ_{n<N} a_n e^{−λ_n t}.
SeriesValue survival_series(const SpectralExpansion& se, double t);

/// p^R = Σ a_n R^{−η^n}; the same sum as survival_series at t = ln R.
SeriesValue disconnection_series(double kappa, double alpha, double beta, double R,
                                 std::size_t N = kDefaultTruncation);

struct EigenScan {
  double start = 1e-6;
  double step_factor = 0.1;      // step = step_factor · κ/8
  double tolerance = 1e-8;
  std::size_t max_steps = 200000;
};

/// First n_max zeros of λ ↦ f_λ(π), by sign-change scan and bisection.
/// Throws DomainError when b = 0 and NumericalError if the scan runs out.
std::vector<double> eigen_solve(const GEvaluator& ev, std::size_t n_max,
                                const EigenScan& scan = {});

/// Half-plane and whole-plane intersection exponents built from V_κ.
double xi_half_plane(double kappa, std::span<const double> alphas);
double xi_whole_plane(double kappa, std::span<const double> alphas);

}  // namespace hsle
