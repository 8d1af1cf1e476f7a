#include "hsle/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsle/errors.hpp"

namespace hsle {
namespace {

constexpr double kSnapTol = 1e-12;

void require_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa <= 4.0)) {
    std::ostringstream os;
    os << "kappa = " << kappa;
    throw RangeError(Violation::kappa_out_of_range, os.str());
  }
}

double sqrt_checked(double x, const char* what) {
  if (x < 0.0) {
    std::ostringstream os;
    os << what << " radicand = " << x;
    throw RangeError(Violation::negative_discriminant, os.str());
  }
  return std::sqrt(x);
}

}  // namespace

double central_charge(double kappa) {
  require_kappa(kappa);
  return (6.0 - kappa) * (3.0 * kappa - 8.0) / (2.0 * kappa);
}

Complex q1_of(double kappa, double mu) {
  const double r = 16.0 * kappa * mu + (4.0 - kappa) * (4.0 - kappa);
  if (r >= 0.0) return std::sqrt(r) / (2.0 * kappa);
  return Complex(0.0, std::sqrt(-r) / (2.0 * kappa));
}

double q2_of(double kappa, double nu) {
  return sqrt_checked(16.0 * kappa * nu + (4.0 - kappa) * (4.0 - kappa), "q2") /
         (4.0 * kappa);
}

double mu_upper_bound(double kappa, double nu) {
  const double s = sqrt_checked(16.0 * kappa * nu + (4.0 - kappa) * (4.0 - kappa), "q2");
  return kappa / 64.0 + nu / 4.0 - 3.0 * (4.0 - kappa) * (4.0 - kappa) / (64.0 * kappa) +
         s / 32.0;
}

Params make_params(double kappa, double mu, double nu) {
  require_kappa(kappa);
  if (!std::isfinite(mu) || !std::isfinite(nu)) {
    throw DomainError("make_params: non-finite mu or nu");
  }
  if (nu < 0.0) {
    std::ostringstream os;
    os << "nu = " << nu;
    throw RangeError(Violation::nu_negative, os.str());
  }
  const double bound = mu_upper_bound(kappa, nu);
  if (mu > bound + kSnapTol * (1.0 + std::abs(bound))) {
    std::ostringstream os;
    os.precision(17);
    os << "mu = " << mu << " > " << bound << " (kappa = " << kappa << ", nu = " << nu << ")";
    throw RangeError(Violation::mu_above_bound, os.str());
  }

  Params p;
  p.kappa = kappa;
  p.mu = mu;
  p.nu = nu;
  p.q1 = q1_of(kappa, mu);
  p.q2 = q2_of(kappa, nu);
  p.a = 0.25 + p.q1 + p.q2;
  p.b = 0.25 - p.q1 + p.q2;
  p.c = 1.0 + 2.0 * p.q2;
  p.d = -1.0 / kappa + 0.25 + p.q2;
  p.e = 2.0 * mu - (6.0 - kappa) * (kappa - 2.0) / (8.0 * kappa);
  if (std::abs(p.b) <= kSnapTol) {
    p.b = 0.0;
    p.a = p.c - 0.5;
    p.q1 = 0.25 + p.q2;
  }
  return p;
}

ExponentPair exponents_from_mu_nu(const Params& p) {
  return {2.0 * p.mu, 1.0 / p.kappa + p.nu + 2.0 * p.q2};
}

double beta_min(double kappa) { return (6.0 - kappa) / (2.0 * kappa); }

MuNu mu_nu_from_exponents(double kappa, const ExponentPair& ep) {
  require_kappa(kappa);
  const double bmin = beta_min(kappa);
  if (ep.beta < bmin - kSnapTol * (1.0 + bmin)) {
    std::ostringstream os;
    os << "beta = " << ep.beta << " < " << bmin;
    throw RangeError(Violation::beta_below_threshold, os.str());
  }
  const double k4 = 4.0 - kappa;
  const double u = -4.0 + std::sqrt(k4 * k4 + 16.0 * kappa * ep.beta);
  const double nu = std::max(0.0, (u * u - k4 * k4) / (16.0 * kappa));
  return {ep.alpha / 2.0, nu};
}

Params params_from_exponents(double kappa, const ExponentPair& ep) {
  const MuNu mn = mu_nu_from_exponents(kappa, ep);
  try {
    return make_params(kappa, mn.mu, mn.nu);
  } catch (const RangeError& err) {
    if (err.violation() == Violation::mu_above_bound) {
      std::ostringstream os;
      os << "alpha = " << ep.alpha << ", beta = " << ep.beta;
      throw RangeError(Violation::alpha_above_eta, os.str());
    }
    throw;
  }
}

double v_kappa(double kappa, double x) {
  const double k4 = 4.0 - kappa;
  return sqrt_checked(16.0 * kappa * x + k4 * k4, "V_kappa") - k4;
}

double v_kappa_inv(double kappa, double x) {
  return (x * x + 2.0 * (4.0 - kappa) * x) / (16.0 * kappa);
}

double chordal_alpha(double kappa, double rho) {
  if (!(rho > -2.0)) {
    std::ostringstream os;
    os << "rho = " << rho;
    throw RangeError(Violation::rho_not_above_minus_two, os.str());
  }
  return (rho + 2.0) * (rho + 6.0 - kappa) / (4.0 * kappa);
}

bool has_real_ab(const Params& p, double tol) {
  return std::abs(p.a.imag()) <= tol && std::abs(p.b.imag()) <= tol;
}

}  // namespace hsle
