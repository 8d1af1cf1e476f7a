#pragma once

#include <complex>

namespace hsle {

using Complex = std::complex<double>;

/// Γ(z) for complex z (Lanczos, reflected for Re z < 1/2).
/// Throws PoleError when z is a non-positive integer.
Complex gamma(Complex z);

/// 1/Γ(z); entire, so it returns exactly zero on the poles of Γ.
Complex rgamma(Complex z);

/// sin(πz) with the real part reduced first, accurate near the integers.
Complex sin_pi(Complex z);

/// Arguments of ₂F₁(a,b;c;z) on the real line. c is real and not a
/// non-positive integer; z < 1.
struct Hyp2F1Request {
  Complex a;
  Complex b;
  double c = 1.0;
  double z = 0.0;
};

/// Gauss hypergeometric function ₂F₁(a,b;c;z) for real z < 1.
///
/// |z| <= 0.7 sums the power series directly. z in (0.7, 1) goes through the
/// connection formula around z = 1, z in [-2.3, -0.7) through the Pfaff
/// transformation and z < -2.3 through the reciprocal-argument identity. When
/// a connection formula is degenerate (the relevant parameter difference is an
/// integer) the value is taken as a limit: the first parameter is displaced
/// symmetrically and the averages are Richardson-extrapolated.
///
/// Throws ConvergenceError when a series misses its tolerance within
/// kHyp2F1MaxTerms terms and DomainError for z >= 1 or c in Z_{<=0}.
Complex hyp2f1(const Hyp2F1Request& req);

/// d/dz ₂F₁(a,b;c;z) = (ab/c) ₂F₁(a+1,b+1;c+1;z).
Complex hyp2f1_deriv(const Hyp2F1Request& req);

/// d²/dz² ₂F₁(a,b;c;z) = (a(a+1)b(b+1))/(c(c+1)) ₂F₁(a+2,b+2;c+2;z).
Complex hyp2f1_deriv2(const Hyp2F1Request& req);

/// Returns the real part of v after checking |Im v| <= tol·(1 + |v|).
/// Throws NumericalError otherwise.
double checked_real(Complex v, double tol = 1e-10);

inline constexpr int kHyp2F1MaxTerms = 10000;
inline constexpr double kHyp2F1RelTol = 1e-14;

namespace detail {

// Individual evaluation routes, exposed so tests can compare them where
// their domains overlap. Parameters are fully complex here because the
// transformations produce complex lower parameters (e.g. a−b+1).

/// Direct power series; requires |z| < 1.
Complex hyp2f1_series(Complex a, Complex b, Complex c, double z);

/// Connection formula around z = 1, for 0 < z < 1.
Complex hyp2f1_near_one(Complex a, Complex b, Complex c, double z);

/// Pfaff transformation (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1)), for z < 0.
Complex hyp2f1_pfaff(Complex a, Complex b, Complex c, double z);

/// Reciprocal-argument identity for z < 0 (series in 1/z).
Complex hyp2f1_reciprocal(Complex a, Complex b, Complex c, double z);

/// Route dispatcher used by hyp2f1, for complex c.
Complex hyp2f1_any(Complex a, Complex b, Complex c, double z);

/// Distance of w from the nearest integer (complex distance).
double distance_to_integer(Complex w);

}  // namespace detail
}  // namespace hsle
