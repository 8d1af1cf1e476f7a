#include "hsle/special_fn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hsle/errors.hpp"

namespace hsle {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Connection formulas switch to the limit procedure below this distance from
// an integer; the displacement is large enough that the displaced evaluations
// keep their cancellation below ~1e-12.
constexpr double kDegenerateTol = 1e-4;
constexpr double kPerturbStep = 2e-3;

constexpr double kSeriesRadius = 0.7;
constexpr double kPfaffLimit = -2.3;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex lanczos(Complex z) {
  z -= 1.0;
  Complex x = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
    x += kLanczosCoeff[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

// Real positive base raised to a complex power.
Complex rpow(double base, Complex exponent) { return std::exp(exponent * std::log(base)); }

// f(a) as the limit of symmetric displacements of the first parameter,
// Richardson-extrapolated to fourth order in the displacement.
template <class F>
Complex limit_in_first_parameter(F&& f, Complex a) {
  const double h = kPerturbStep;
  const Complex wide = 0.5 * (f(a + h) + f(a - h));
  const Complex narrow = 0.5 * (f(a + 0.5 * h) + f(a - 0.5 * h));
  return (4.0 * narrow - wide) / 3.0;
}

Complex near_one_direct(Complex a, Complex b, Complex c, double z) {
  const Complex s = c - a - b;
  const double w = 1.0 - 1.0 / z;
  const Complex gc = gamma(c);
  const Complex t1 = gc * gamma(s) * rgamma(c - a) * rgamma(c - b) * rpow(z, -a) *
                     detail::hyp2f1_any(a, a - c + 1.0, 1.0 - s, w);
  const Complex t2 = gc * gamma(-s) * rgamma(a) * rgamma(b) * rpow(1.0 - z, s) *
                     rpow(z, a - c) * detail::hyp2f1_any(c - a, 1.0 - a, s + 1.0, w);
  return t1 + t2;
}

Complex reciprocal_direct(Complex a, Complex b, Complex c, double z) {
  const double w = 1.0 / z;
  const Complex gc = gamma(c);
  const Complex t1 = gc * gamma(b - a) * rgamma(b) * rgamma(c - a) * rpow(-z, -a) *
                     detail::hyp2f1_any(a, a - c + 1.0, a - b + 1.0, w);
  const Complex t2 = gc * gamma(a - b) * rgamma(a) * rgamma(c - b) * rpow(-z, -b) *
                     detail::hyp2f1_any(b, b - c + 1.0, b - a + 1.0, w);
  return t1 + t2;
}

}  // namespace

Complex sin_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex r(z.real() - n, z.imag());
  Complex s = std::sin(kPi * r);
  if (std::fmod(std::abs(n), 2.0) == 1.0) s = -s;
  return s;
}

Complex gamma(Complex z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("gamma: pole at z = " + std::to_string(z.real()));
  }
  if (z.real() < 0.5) {
    return kPi / (sin_pi(z) * gamma(1.0 - z));
  }
  return lanczos(z);
}

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) {
    return sin_pi(z) * gamma(1.0 - z) / kPi;
  }
  return 1.0 / lanczos(z);
}

double checked_real(Complex v, double tol) {
  if (!(std::abs(v.imag()) <= tol * (1.0 + std::abs(v)))) {
    throw NumericalError("imaginary residue " + std::to_string(v.imag()) +
                         " exceeds tolerance for a real-valued quantity");
  }
  return v.real();
}

namespace detail {

double distance_to_integer(Complex w) {
  return std::abs(w - std::round(w.real()));
}

Complex hyp2f1_series(Complex a, Complex b, Complex c, double z) {
  if (!(std::abs(z) < 1.0)) {
    throw DomainError("hyp2f1 series requires |z| < 1");
  }
  if (is_nonpositive_integer(c)) {
    throw DomainError("hyp2f1: c is a non-positive integer");
  }
  Complex term = 1.0;
  Complex sum = 1.0;
  int quiet = 0;
  for (int n = 0; n < kHyp2F1MaxTerms; ++n) {
    const double dn = n;
    const Complex ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;  // terminating series
    if (std::abs(term) <= kHyp2F1RelTol * std::abs(sum) && std::abs(ratio) < 1.0) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("hyp2f1 series did not converge within " +
                         std::to_string(kHyp2F1MaxTerms) + " terms at z = " +
                         std::to_string(z));
}

Complex hyp2f1_near_one(Complex a, Complex b, Complex c, double z) {
  if (!(z > 0.0 && z < 1.0)) {
    throw DomainError("hyp2f1 connection at z = 1 requires 0 < z < 1");
  }
  if (distance_to_integer(c - a - b) < kDegenerateTol) {
    return limit_in_first_parameter(
        [&](Complex ap) { return near_one_direct(ap, b, c, z); }, a);
  }
  return near_one_direct(a, b, c, z);
}

Complex hyp2f1_pfaff(Complex a, Complex b, Complex c, double z) {
  if (!(z < 0.0)) {
    throw DomainError("hyp2f1 Pfaff route requires z < 0");
  }
  const double w = z / (z - 1.0);
  return rpow(1.0 - z, -a) * hyp2f1_any(a, c - b, c, w);
}

Complex hyp2f1_reciprocal(Complex a, Complex b, Complex c, double z) {
  if (!(z < 0.0)) {
    throw DomainError("hyp2f1 reciprocal route requires z < 0");
  }
  if (distance_to_integer(a - b) < kDegenerateTol) {
    return limit_in_first_parameter(
        [&](Complex ap) { return reciprocal_direct(ap, b, c, z); }, a);
  }
  return reciprocal_direct(a, b, c, z);
}

Complex hyp2f1_any(Complex a, Complex b, Complex c, double z) {
  if (!(z < 1.0)) {
    throw DomainError("hyp2f1 requires z < 1");
  }
  if (std::abs(z) <= kSeriesRadius) return hyp2f1_series(a, b, c, z);
  if (z > 0.0) return hyp2f1_near_one(a, b, c, z);
  if (z >= kPfaffLimit) return hyp2f1_pfaff(a, b, c, z);
  return hyp2f1_reciprocal(a, b, c, z);
}

}  // namespace detail

Complex hyp2f1(const Hyp2F1Request& req) {
  if (!std::isfinite(req.z) || !std::isfinite(req.c)) {
    throw DomainError("hyp2f1: non-finite argument");
  }
  if (req.c <= 0.0 && req.c == std::floor(req.c)) {
    throw DomainError("hyp2f1: c is a non-positive integer");
  }
  if (!(req.z < 1.0)) {
    throw DomainError("hyp2f1: z must be < 1");
  }
  return detail::hyp2f1_any(req.a, req.b, req.c, req.z);
}

Complex hyp2f1_deriv(const Hyp2F1Request& req) {
  const Complex scale = req.a * req.b / req.c;
  return scale * hyp2f1({req.a + 1.0, req.b + 1.0, req.c + 1.0, req.z});
}

Complex hyp2f1_deriv2(const Hyp2F1Request& req) {
  const Complex scale =
      req.a * (req.a + 1.0) * req.b * (req.b + 1.0) / (req.c * (req.c + 1.0));
  return scale * hyp2f1({req.a + 2.0, req.b + 2.0, req.c + 2.0, req.z});
}

}  // namespace hsle
