#include "hsle/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hsle/errors.hpp"

namespace hsle {
namespace {

constexpr std::size_t kTailTerms = 12;
constexpr double kWarnTerm = 1e-9;

double root_checked(double x, const char* what) {
  if (x < 0.0) {
    std::ostringstream os;
    os << what << ": radicand " << x << " < 0";
    throw RangeError(Violation::negative_discriminant, os.str());
  }
  return std::sqrt(x);
}

double s_of(const Params& p) {
  return std::sqrt(16.0 * p.kappa * p.nu + (4.0 - p.kappa) * (4.0 - p.kappa));
}

}  // namespace

double eta(double kappa, double beta) {
  const double k4 = 4.0 - kappa;
  const double r = root_checked(16.0 * beta * kappa + k4 * k4, "eta");
  return ((r - k4) * (r - k4) - 4.0 * k4 * k4) / (32.0 * kappa);
}

double eta_n(double kappa, double alpha, double beta, int n) {
  if (n < 0) throw DomainError("eta_n: n must be >= 0");
  const double k4 = 4.0 - kappa;
  const double r = root_checked(16.0 * kappa * beta + k4 * k4, "eta_n");
  const double dn = n;
  return (dn * dn + dn - 0.5) * kappa / 8.0 - (dn - 1.0) / 2.0 - 1.0 / kappa + beta / 2.0 +
         ((dn + 0.5) / 8.0 - 1.0 / (4.0 * kappa)) * r - alpha;
}

double eta_of_c(double c, double beta) {
  if (c > 1.0) {
    std::ostringstream os;
    os << "eta_of_c: c = " << c << " > 1";
    throw DomainError(os.str());
  }
  const double u = root_checked(24.0 * beta + 1.0 - c, "eta_of_c");
  const double v = std::sqrt(1.0 - c);
  return ((u - v) * (u - v) - 4.0 * (1.0 - c)) / 48.0;
}

double lambda_n(const Params& p, int n) {
  if (n < 0) throw DomainError("lambda_n: n must be >= 0");
  const double k = p.kappa;
  const double x = n + 0.5;
  return x * x * k / 8.0 + p.nu / 2.0 - 3.0 * (4.0 - k) * (4.0 - k) / (32.0 * k) -
         2.0 * p.mu + x * s_of(p) / 8.0;
}

std::vector<double> lambda_sequence(const Params& p, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lambda_n(p, static_cast<int>(i));
  return out;
}

TruncatedProduct coeff_a_n(std::span<const double> lambdas, std::size_t n, std::size_t N,
                           double kappa) {
  if (N > lambdas.size() || n >= N) {
    throw DomainError("coeff_a_n: need n < N <= number of lambdas");
  }
  const double ln = lambdas[n];
  double log_abs = 0.0;
  bool negative = false;
  for (std::size_t k = 0; k < N; ++k) {
    if (k == n) continue;
    if (lambdas[k] == ln) {
      std::ostringstream os;
      os << "coeff_a_n: repeated eigenvalue " << ln << " at k = " << k;
      throw NumericalError(os.str());
    }
    const double f = 1.0 - ln / lambdas[k];
    if (f < 0.0) negative = !negative;
    log_abs -= std::log(std::abs(f));
  }
  TruncatedProduct out;
  out.value = negative ? -std::exp(log_abs) : std::exp(log_abs);
  if (N > n + 1) {
    out.rel_remainder = std::expm1(8.0 * std::abs(ln) / (kappa * static_cast<double>(N - n - 1)));
  } else {
    out.rel_remainder = std::numeric_limits<double>::infinity();
  }
  return out;
}

SpectralExpansion build_spectral_expansion(const Params& p, std::size_t N,
                                           std::size_t product_terms) {
  if (p.b == 0.0) {
    throw DomainError("spectral expansion requires b != 0 (lambda_0 = 0 otherwise)");
  }
  if (N == 0 || product_terms / 2 < N + kTailTerms + 1) {
    throw DomainError("spectral expansion: truncation must be positive and below product_terms");
  }
  SpectralExpansion se;
  se.params = p;
  se.product_terms = product_terms;
  const std::vector<double> lam = lambda_sequence(p, product_terms);
  if (lam.front() <= 0.0) {
    throw NumericalError("spectral expansion: lambda_0 <= 0");
  }
  // Σ_{k≥K} 1/λ_k ≈ 8/(κK) − 4S/(κ²K²) for λ_k = κ(k+1/2)²/8 + S(k+1/2)/8 + const.
  const double kappa = p.kappa;
  const double s = s_of(p);
  auto tail_inv = [&](std::size_t terms) {
    const double K = static_cast<double>(terms);
    return 8.0 / (kappa * K) - 4.0 * s / (kappa * kappa * K * K);
  };
  const std::size_t half = product_terms / 2;

  // Corrected product over K terms; the same with K/2 terms sizes its error.
  auto coefficient = [&](std::size_t n, double& rel_err) {
    const double full =
        coeff_a_n(lam, n, product_terms, kappa).value * std::exp(lam[n] * tail_inv(product_terms));
    const double coarse = coeff_a_n(lam, n, half, kappa).value * std::exp(lam[n] * tail_inv(half));
    rel_err = std::abs(full - coarse) / std::abs(full);
    return full;
  };

  se.lambdas.assign(lam.begin(), lam.begin() + static_cast<std::ptrdiff_t>(N));
  se.coeffs.resize(N);
  se.coeff_remainders.resize(N);
  for (std::size_t n = 0; n < N; ++n) se.coeffs[n] = coefficient(n, se.coeff_remainders[n]);
  for (std::size_t n = N; n < N + kTailTerms; ++n) {
    double rem = 0.0;
    se.tail_lambdas.push_back(lam[n]);
    se.tail_coeffs.push_back(coefficient(n, rem));
  }
  return se;
}

SeriesValue survival_series(const SpectralExpansion& se, double t) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw DomainError("survival_series: t must be finite and >= 0");
  }
  SeriesValue out;
  if (t == 0.0) {
    out.value = 1.0;
    return out;
  }
  double sum = 0.0;
  double coeff_err = 0.0;
  for (std::size_t n = 0; n < se.lambdas.size(); ++n) {
    const double term = se.coeffs[n] * std::exp(-se.lambdas[n] * t);
    sum += term;
    coeff_err += std::abs(term) * se.coeff_remainders[n];
  }
  double tail = 0.0;
  for (std::size_t n = 0; n < se.tail_lambdas.size(); ++n) {
    tail += std::abs(se.tail_coeffs[n]) * std::exp(-se.tail_lambdas[n] * t);
  }
  out.value = sum;
  out.remainder = tail + coeff_err;
  if (!se.tail_coeffs.empty()) {
    out.truncation_warning =
        std::abs(se.tail_coeffs.front()) * std::exp(-se.tail_lambdas.front() * t) > kWarnTerm;
  }
  out.out_of_range = sum < -out.remainder - 1e-12 || sum > 1.0 + out.remainder + 1e-12;
  return out;
}

SeriesValue disconnection_series(double kappa, double alpha, double beta, double R,
                                 std::size_t N) {
  if (!(R >= 1.0)) throw DomainError("disconnection_series: R must be >= 1");
  const Params p = params_from_exponents(kappa, {alpha, beta});
  if (p.b == 0.0) {
    throw DomainError("disconnection_series: alpha = eta_kappa(beta) gives lambda_0 = 0");
  }
  return survival_series(build_spectral_expansion(p, N), std::log(R));
}

std::vector<double> eigen_solve(const GEvaluator& ev, std::size_t n_max, const EigenScan& scan) {
  if (ev.b_zero()) throw DomainError("eigen_solve requires b != 0");
  std::vector<double> roots;
  if (n_max == 0) return roots;
  const double step = scan.step_factor * ev.params().kappa / 8.0;
  auto f = [&](double lam) { return f_lambda_at_pi(ev, lam); };

  double lo = scan.start;
  double flo = f(lo);
  if (flo == 0.0) roots.push_back(lo);
  for (std::size_t i = 0; i < scan.max_steps && roots.size() < n_max; ++i) {
    const double hi = lo + step;
    const double fhi = f(hi);
    if (fhi == 0.0) {
      roots.push_back(hi);
    } else if (flo != 0.0 && (flo < 0.0) != (fhi < 0.0)) {
      double a = lo, b = hi, fa = flo;
      while (b - a > scan.tolerance) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  if (roots.size() < n_max) {
    std::ostringstream os;
    os << "eigen_solve: found " << roots.size() << " of " << n_max
       << " sign changes within the scan window";
    throw NumericalError(os.str());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

double v_sum(double kappa, std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("intersection exponent needs at least one alpha");
  double s = 0.0;
  for (double a : alphas) s += v_kappa(kappa, a);
  return s;
}

}  // namespace

double xi_half_plane(double kappa, std::span<const double> alphas) {
  return v_kappa_inv(kappa, v_sum(kappa, alphas));
}

double xi_whole_plane(double kappa, std::span<const double> alphas) {
  const double s = v_sum(kappa, alphas);
  return s * s / (32.0 * kappa) - (4.0 - kappa) * (4.0 - kappa) / (8.0 * kappa);
}

}  // namespace hsle
