#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "hsle/errors.hpp"
#include "hsle/exponents.hpp"

using doctest::Approx;
using hsle::Complex;

namespace {

// a_n in closed form. Writing λ_k = (κ/8)(k − r1)(k − r2) and s = S/κ, the
// infinite product telescopes into Gamma functions:
//   a_n = Γ(n+1+s)(2n+1+s) / [Γ(−r1)Γ(−r2)(n−r1)(n−r2)(−1)^n n!].
double a_n_closed_form(const hsle::Params& p, int n) {
  const double k = p.kappa;
  const double S = std::sqrt(16.0 * k * p.nu + (4.0 - k) * (4.0 - k));
  const double s = S / k;
  const double c0 = p.nu / 2.0 - 3.0 * (4.0 - k) * (4.0 - k) / (32.0 * k) - 2.0 * p.mu;
  const double sum = -(1.0 + s);
  const double prod = 0.25 + s / 2.0 + 8.0 * c0 / k;
  const Complex disc = std::sqrt(Complex(sum * sum - 4.0 * prod));
  const Complex r1 = (sum + disc) / 2.0;
  const Complex r2 = (sum - disc) / 2.0;
  const double dn = n;
  const Complex num = hsle::gamma(dn + 1.0 + s) * (2.0 * dn + 1.0 + s);
  const Complex den = hsle::gamma(-r1) * hsle::gamma(-r2) * (dn - r1) * (dn - r2) *
                      (n % 2 == 0 ? 1.0 : -1.0) * std::tgamma(dn + 1.0);
  return (num / den).real();
}

}  // namespace

TEST_CASE("eta at distinguished points") {
  CHECK(hsle::eta(4.0, 4.0) == Approx(2.0).epsilon(1e-14));
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const double brownian = (std::pow(std::sqrt(24.0 * beta + 1.0) - 1.0, 2) - 4.0) / 48.0;
    CHECK(std::abs(hsle::eta(8.0 / 3.0, beta) - brownian) < 1e-12);
  }
  CHECK(hsle::eta(8.0 / 3.0, 2.0) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(hsle::eta(3.0, -10.0), hsle::RangeError);
}

TEST_CASE("eta_n structure") {
  for (double kappa : {1.0, 2.0, 8.0 / 3.0, 3.5, 4.0}) {
    for (double beta : {0.8, 1.5, 3.0}) {
      CHECK(std::abs(hsle::eta_n(kappa, 0.0, beta, 0) - hsle::eta(kappa, beta)) < 1e-12);
      for (int n = 0; n < 6; ++n) {
        CHECK(std::abs(hsle::eta_n(kappa, 0.7, beta, n) - hsle::eta_n(kappa, 0.0, beta, n) + 0.7) <
              1e-12);
        CHECK(hsle::eta_n(kappa, 0.0, beta, n + 1) > hsle::eta_n(kappa, 0.0, beta, n));
      }
    }
  }
  // κ=3, α=0, β=1, n=1 term by term: (1+1−1/2)·3/8 − 0 − 1/3 + 1/2 + (3/16 − 1/12)·√49.
  const double want = 1.5 * 3.0 / 8.0 - 1.0 / 3.0 + 0.5 + (1.5 / 8.0 - 1.0 / 12.0) * 7.0;
  CHECK(hsle::eta_n(3.0, 0.0, 1.0, 1) == Approx(want).epsilon(1e-14));
}

TEST_CASE("eta as a function of c") {
  CHECK(hsle::eta_of_c(0.0, 2.0) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(hsle::eta_of_c(1.0, 4.0) == Approx(2.0).epsilon(1e-14));
  CHECK(hsle::eta_of_c(0.2, 2.0) < hsle::eta_of_c(0.8, 2.0));
  for (int i = 1; i <= 20; ++i) {
    const double kappa = 4.0 * i / 20.0;
    for (double beta : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double b = std::max(beta, hsle::beta_min(kappa));
      CHECK(std::abs(hsle::eta_of_c(hsle::central_charge(kappa), b) - hsle::eta(kappa, b)) <
            1e-12 * (1.0 + std::abs(hsle::eta(kappa, b))));
    }
  }
  CHECK_THROWS_AS(hsle::eta_of_c(1.5, 1.0), hsle::DomainError);
}

TEST_CASE("lambda_n: both closed forms agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uk(0.3, 4.0), un(0.0, 3.0), ug(0.01, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double kappa = uk(rng), nu = un(rng);
    const auto p = hsle::make_params(kappa, hsle::mu_upper_bound(kappa, nu) - ug(rng), nu);
    const auto ep = hsle::exponents_from_mu_nu(p);
    for (int n = 0; n < 8; ++n) {
      const double a = hsle::lambda_n(p, n);
      const double b = hsle::eta_n(kappa, ep.alpha, ep.beta, n);
      CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
    }
    CHECK(hsle::lambda_n(p, 0) > 0.0);
    CHECK(hsle::lambda_n(p, 0) < hsle::lambda_n(p, 1));
    CHECK(hsle::lambda_n(p, 1) < hsle::lambda_n(p, 2));
  }
  const auto p = hsle::make_params(4.0, 0.0, 0.0);
  for (int n = 0; n < 5; ++n) CHECK(hsle::lambda_n(p, n) == Approx((n + 0.5) * (n + 0.5) / 2.0));
  // b = 0 is exactly where λ_0 vanishes
  const auto q = hsle::make_params(3.0, hsle::mu_upper_bound(3.0, 0.4), 0.4);
  CHECK(std::abs(hsle::lambda_n(q, 0)) < 1e-12);
}

TEST_CASE("truncated products sum to one") {
  const auto p = hsle::make_params(4.0, 0.0, 0.0);
  const auto lam = hsle::lambda_sequence(p, 40);
  double sum = 0.0;
  for (std::size_t n = 0; n < 40; ++n) sum += hsle::coeff_a_n(lam, n, 40, 4.0).value;
  CHECK(std::abs(sum - 1.0) <= 1e-6);
  CHECK(hsle::coeff_a_n(lam, 0, 40, 4.0).value > 1.0);
  CHECK(hsle::coeff_a_n(lam, 1, 40, 4.0).value < 0.0);
  std::vector<double> dup = {1.0, 2.0, 2.0, 3.0};
  CHECK_THROWS_AS(hsle::coeff_a_n(dup, 1, 4, 4.0), hsle::NumericalError);
}

TEST_CASE("spectral coefficients match the Gamma closed form") {
  const std::vector<hsle::Params> sets = {
      hsle::make_params(4.0, 0.0, 1.0), hsle::make_params(3.0, 0.1, 0.5),
      hsle::make_params(3.0, -1.0 / 48.0 - 0.4, 0.2), hsle::make_params(4.0, -0.5, 0.0),
      hsle::make_params(2.0, -0.3, 0.7)};
  for (const auto& p : sets) {
    const auto se = hsle::build_spectral_expansion(p);
    for (std::size_t n = 0; n < se.coeffs.size(); ++n) {
      const double want = a_n_closed_form(p, static_cast<int>(n));
      CHECK(se.coeffs[n] == Approx(want).epsilon(1e-6));
      CHECK(se.coeff_remainders[n] < 1e-4);
    }
  }
  // With κ=4, μ=ν=0 the coefficients are 4(−1)^n/(π(2n+1)).
  const auto se = hsle::build_spectral_expansion(hsle::make_params(4.0, -1e-9, 0.0));
  for (int n = 0; n < 5; ++n) {
    CHECK(se.coeffs[n] == Approx(4.0 * (n % 2 ? -1 : 1) / (M_PI * (2 * n + 1))).epsilon(1e-6));
  }
}

TEST_CASE("survival series behaviour") {
  const auto p = hsle::make_params(4.0, 0.0, 1.0);
  const auto se = hsle::build_spectral_expansion(p);
  CHECK(se.lambdas[0] == Approx(1.125));
  CHECK(hsle::survival_series(se, 0.0).value == 1.0);
  const auto small = hsle::survival_series(se, 0.05);
  CHECK(small.value > 0.97);
  CHECK(small.value <= 1.0 + small.remainder);
  double prev = 1.0;
  for (int i = 1; i <= 60; ++i) {
    const double t = 0.05 * i;
    const auto v = hsle::survival_series(se, t);
    // flat to double precision for the first few steps
    CHECK(v.value <= prev + v.remainder);
    if (t >= 0.5) CHECK(v.value < prev);
    CHECK_FALSE(v.out_of_range);
    CHECK_FALSE(v.truncation_warning);
    prev = v.value;
  }
  const double t = 12.0;
  CHECK(hsle::survival_series(se, t).value ==
        Approx(se.coeffs[0] * std::exp(-se.lambdas[0] * t)).epsilon(1e-9));
  CHECK(hsle::survival_series(se, 1e-4).truncation_warning);
  CHECK_THROWS_AS(hsle::survival_series(se, -1.0), hsle::DomainError);
}

TEST_CASE("disconnection probability") {
  const double kappa = 3.0, alpha = 0.2, beta = 5.0 / 3.0;
  const auto p = hsle::params_from_exponents(kappa, {alpha, beta});
  const auto se = hsle::build_spectral_expansion(p);
  for (double R : {1.5, 3.0, 20.0}) {
    CHECK(hsle::disconnection_series(kappa, alpha, beta, R).value ==
          hsle::survival_series(se, std::log(R)).value);
  }
  CHECK(hsle::disconnection_series(kappa, alpha, beta, 1.0).value == 1.0);
  // −d ln p / d ln R tends to η_κ(α,β) = η_κ(β) − α
  const double R1 = 1e6, R2 = 1e7;
  const double slope = -(std::log(hsle::disconnection_series(kappa, alpha, beta, R2).value) -
                         std::log(hsle::disconnection_series(kappa, alpha, beta, R1).value)) /
                       (std::log(R2) - std::log(R1));
  CHECK(slope == Approx(hsle::eta(kappa, beta) - alpha).epsilon(1e-6));
}

TEST_CASE("eigen_solve recovers lambda_n without using it") {
  const std::vector<hsle::Params> sets = {hsle::make_params(3.0, 0.1, 0.5),
                                          hsle::make_params(4.0, 0.0, 1.0),
                                          hsle::make_params(3.0, -1.0 / 48.0 - 0.4, 0.2)};
  for (const auto& p : sets) {
    const hsle::GEvaluator ev(p);
    const auto roots = hsle::eigen_solve(ev, 4);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0] > 0.0);
    for (int n = 0; n < 4; ++n) {
      CHECK(std::abs(roots[n] - hsle::lambda_n(p, n)) < 1e-6);
      const double h = 1e-4;
      CHECK(hsle::f_lambda_at_pi(ev, roots[n] - h) * hsle::f_lambda_at_pi(ev, roots[n] + h) < 0.0);
    }
  }
}

TEST_CASE("intersection exponents") {
  const std::vector<double> one = {1.3};
  CHECK(hsle::xi_half_plane(3.0, one) == Approx(1.3).epsilon(1e-14));
  const std::vector<double> two = {1.0, 1.0};
  const double half = hsle::xi_half_plane(3.0, two);
  CHECK(std::abs(hsle::xi_whole_plane(3.0, two) - hsle::eta(3.0, half)) < 1e-12);
  // κ = 8/3: √(24ξ̃+1) = Σ√(24α_i+1) − (n−1), the classical Brownian cascade
  const std::vector<double> al = {0.5, 2.0, 1.0};
  double s = 0.0;
  for (double a : al) s += std::sqrt(24.0 * a + 1.0) - 1.0;
  const double xi_half = (std::pow(s + 1.0, 2) - 1.0) / 24.0;
  CHECK(hsle::xi_half_plane(8.0 / 3.0, al) == Approx(xi_half).epsilon(1e-13));
  const double xi_whole = (std::pow(s, 2) - 4.0) / 48.0;
  CHECK(hsle::xi_whole_plane(8.0 / 3.0, al) == Approx(xi_whole).epsilon(1e-13));
}
