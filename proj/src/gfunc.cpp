#include "hsle/gfunc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hsle/errors.hpp"

namespace hsle {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// Value and first two derivatives in θ.
struct Jet {
  Complex v, d1, d2;
};

Jet operator*(const Jet& x, const Jet& y) {
  return {x.v * y.v, x.d1 * y.v + x.v * y.d1, x.d2 * y.v + 2.0 * x.d1 * y.d1 + x.v * y.d2};
}

Jet operator*(Complex s, const Jet& x) { return {s * x.v, s * x.d1, s * x.d2}; }

Jet operator+(const Jet& x, const Jet& y) { return {x.v + y.v, x.d1 + y.d1, x.d2 + y.d2}; }

// u^p for a real positive-valued jet u.
Jet pow_jet(const Jet& u, Complex p) {
  const double base = u.v.real();
  const Complex up = std::exp(p * std::log(base));
  const Complex up1 = up / base;
  const Complex up2 = up1 / base;
  return {up, p * up1 * u.d1, p * (p - 1.0) * up2 * u.d1 * u.d1 + p * up1 * u.d2};
}

// ₂F₁(a,b;c;u(θ)) with the chain rule applied.
Jet hyp_of(Complex a, Complex b, double c, const Jet& u) {
  const Hyp2F1Request req{a, b, c, u.v.real()};
  const Complex f = hyp2f1(req);
  const Complex f1 = hyp2f1_deriv(req);
  const Complex f2 = hyp2f1_deriv2(req);
  return {f, f1 * u.d1, f2 * u.d1 * u.d1 + f1 * u.d2};
}

Jet sine_power_jet(double d, double theta) {
  const double s = std::sin(theta);
  const double cs = std::cos(theta);
  return pow_jet({s, cs, -s}, 2.0 * d);
}

Jet sine_form_jet(const GForm& f, double theta) {
  const double s = std::sin(theta);
  const double cs = std::cos(theta);
  const Jet u{s * s, 2.0 * s * cs, 2.0 * (cs * cs - s * s)};
  return sine_power_jet(f.d, theta) * hyp_of(f.a, f.b, f.c, u);
}

Jet cot_form_jet(const GForm& f, double theta) {
  const double x = std::cos(theta) / std::sin(theta);
  const double y = 1.0 + x * x;
  const Jet xj{x, -y, 2.0 * x * y};
  const Jet yj{y, -2.0 * x * y, 2.0 * y * y + 4.0 * x * x * y};
  const Jet zj{-x * x, 2.0 * x * y, -2.0 * y * y - 4.0 * x * x * y};

  const Complex gc = gamma(Complex(f.c));
  const Complex pre1 = gc * kSqrtPi * rgamma(f.c - f.a) * rgamma(f.c - f.b);
  const Complex pre2 = gc * (-2.0 * kSqrtPi) * rgamma(f.a) * rgamma(f.b);

  Jet t1 = pre1 * (pow_jet(yj, f.a - f.d) * hyp_of(f.a, f.a - f.c + 1.0, 0.5, zj));
  if (pre2 == 0.0) return t1;
  Jet t2 = pre2 * (xj * pow_jet(yj, f.b - f.d) * hyp_of(f.c - f.a, 1.0 - f.a, 1.5, zj));
  return t1 + t2;
}

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi)) {
    std::ostringstream os;
    os << "theta = " << theta << " outside (0, pi)";
    throw DomainError(os.str());
  }
}

Complex rgamma_product(Complex a, Complex b, double c) {
  return rgamma(a) * rgamma(b) * rgamma(c - a) * rgamma(a + 0.5);
}

bool on_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

GForm form_of(const Params& p) { return {p.a, p.b, p.c, p.d}; }

GForm shifted_form(const Params& p, double lambda) {
  const Complex q1 = q1_of(p.kappa, p.mu + lambda / 2.0);
  GForm f{0.25 + q1 + p.q2, 0.25 - q1 + p.q2, p.c, p.d};
  if (lambda == 0.0) {
    f.a = p.a;
    f.b = p.b;
  }
  return f;
}

GJet g_jet(const GForm& f, double theta) {
  require_theta(theta);
  Jet j;
  if (f.b == 0.0) {
    j = sine_power_jet(f.d, theta);
  } else if (theta < kPi / 4.0) {
    j = sine_form_jet(f, theta);
  } else {
    j = cot_form_jet(f, theta);
  }
  GJet out;
  out.g = j.v.real();
  out.dg = j.d1.real();
  out.d2g = j.d2.real();
  const double mag = std::abs(j.v);
  out.imag_residue = mag > 0.0 ? std::abs(j.v.imag()) / mag : std::abs(j.v.imag());
  out.imag_flagged = out.imag_residue > kGImagFlagTol;
  return out;
}

GEvaluator::GEvaluator(const Params& p)
    : params_(p), form_(form_of(p)), b_zero_(p.b == 0.0) {}

GJet GEvaluator::jet(double theta) const { return g_jet(form_, theta); }

double g_eval(const GEvaluator& ev, double theta) { return ev.jet(theta).g; }

double g_log_deriv(const GEvaluator& ev, double theta) {
  if (ev.b_zero()) {
    require_theta(theta);
    return 2.0 * ev.params().d * std::cos(theta) / std::sin(theta);
  }
  const GJet j = ev.jet(theta);
  if (std::abs(j.g) < 1e-300) {
    throw NumericalError("G vanishes numerically; G'/G is singular");
  }
  return j.dg / j.g;
}

double ode_residual_form(const GForm& f, double kappa, double nu, double e_value,
                         double theta) {
  const GJet j = g_jet(f, theta);
  if (std::abs(j.g) < 1e-300) {
    throw NumericalError("G vanishes numerically; ODE residual undefined");
  }
  const double s = std::sin(theta);
  const double cot = std::cos(theta) / s;
  return e_value - nu / (2.0 * s * s) + (j.dg / j.g) * cot / 2.0 +
         (kappa / 8.0) * (j.d2g / j.g);
}

double ode_residual(const GEvaluator& ev, double theta) {
  const Params& p = ev.params();
  return ode_residual_form(ev.form(), p.kappa, p.nu, p.e, theta);
}

C2Constant c2_constant(Complex a, Complex b, double c) {
  C2Constant out;
  out.pole_zero = on_pole(a) || on_pole(b) || on_pole(c - a) || on_pole(a + 0.5);
  out.infinite = on_pole(Complex(c - 1.0));
  if (out.pole_zero) return out;
  if (out.infinite) {
    out.value = std::numeric_limits<double>::infinity();
    out.c1 = -out.value;
    return out;
  }
  const Complex gc = gamma(Complex(c));
  const Complex gcm1 = gamma(Complex(c - 1.0));
  // C₂ = Γ(c)Γ(−1/2)/(Γ(a)Γ(b)) · Γ(3/2)Γ(c−1)/(Γ(c−a)Γ(1/2+a))
  const Complex c2 = gc * (-2.0 * kSqrtPi) * (0.5 * kSqrtPi) * gcm1 * rgamma(a) * rgamma(b) *
                     rgamma(c - a) * rgamma(0.5 + a);
  // C₁ = Γ(c)Γ(1/2)/(Γ(c−a)Γ(c−b)) · Γ(1/2)Γ(c−1)/(Γ(a)Γ(c−1/2−a))
  const Complex c1 = gc * kSqrtPi / (gamma(c - a) * gamma(c - b)) * kSqrtPi * gcm1 /
                     (gamma(a) * gamma(c - 0.5 - a));
  out.value = checked_real(c2);
  out.c1 = checked_real(c1);
  return out;
}

double f_lambda(const GEvaluator& ev, double lambda, double theta) {
  if (lambda == 0.0) {
    require_theta(theta);
    return 1.0;
  }
  const GJet num = g_jet(shifted_form(ev.params(), lambda), theta);
  const GJet den = ev.jet(theta);
  if (std::abs(den.g) < 1e-300) {
    throw NumericalError("G vanishes numerically; f_lambda undefined");
  }
  return num.g / den.g;
}

double f_lambda_at_pi(const GEvaluator& ev, double lambda) {
  const Params& p = ev.params();
  if (ev.b_zero()) {
    throw DomainError("f_lambda(pi) requires b != 0");
  }
  const GForm s = shifted_form(p, lambda);
  const Complex den = rgamma_product(p.a, p.b, p.c);
  const Complex num = rgamma_product(s.a, s.b, p.c);
  return checked_real(num / den);
}

double g_asymptotic_pi(const GEvaluator& ev, double theta) {
  require_theta(theta);
  const Params& p = ev.params();
  if (ev.b_zero()) return std::pow(std::sin(theta), 2.0 * p.d);
  const C2Constant k = c2_constant(p.a, p.b, p.c);
  if (k.infinite) {
    throw DomainError("C2 is infinite at c = 1; no power-law asymptotic at pi");
  }
  return -2.0 * k.value * std::pow(kPi - theta, 2.0 * p.d + 2.0 - 2.0 * p.c);
}

double natural_scale_density(const GEvaluator& ev, double theta) {
  const double g = g_eval(ev, theta);
  const double h = std::pow(std::sin(theta), -4.0 / ev.params().kappa) / (g * g);
  if (!std::isfinite(h)) {
    std::ostringstream os;
    os << "natural scale density overflows at theta = " << theta;
    throw NumericalError(os.str());
  }
  return h;
}

}  // namespace hsle
