#include "hsle/loewner.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hsle/errors.hpp"
#include "hsle/exponents.hpp"

namespace hsle {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiskSlack = 1e-6;

void check_theta0(double theta0) {
  if (!(theta0 > 0.0 && theta0 < kPi)) {
    throw DomainError("theta0 must lie in (0, pi)");
  }
}

bool inside_closed_disk(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) <= 1.0 + kDiskSlack;
}

}  // namespace

DrivePath drive_from_theta(const DiffusionPath& path) {
  if (path.thetas.empty() || path.times.size() != path.thetas.size()) {
    throw DomainError("drive_from_theta: path was not recorded");
  }
  DrivePath dp;
  const std::size_t n = path.thetas.size();
  dp.times = path.times;
  dp.theta = path.thetas;
  dp.W.resize(n);
  dp.V.resize(n);
  dp.hit_time = path.hit_time;
  dp.rng_seed = path.rng_seed;
  dp.path_index = path.path_index;
  dp.V[0] = -2.0 * path.thetas[0];
  dp.W[0] = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const double th = path.thetas[k + 1];
    // With the driver frozen at W_{k+1}, a boundary point at half-angle ϑ from
    // it moves as cos²ϑ ↦ e^{−dt} cos²ϑ. Pick V_{k+1} so that it lands at θ_{k+1}.
    const double c = std::cos(th), s = std::sin(th);
    const double s2 = s * s - std::expm1(dt) * c * c;
    if (s2 < 0.0) ++dp.swallowed_steps;
    const double before = std::atan2(std::sqrt(std::max(0.0, s2)), std::exp(0.5 * dt) * c);
    dp.V[k + 1] = dp.V[k] + 2.0 * (before - th);
    dp.W[k + 1] = dp.V[k + 1] + 2.0 * th;
  }
  return dp;
}

std::size_t terminal_index(const DrivePath& dp) {
  if (dp.size() == 0) throw DomainError("terminal_index: empty driving path");
  return dp.hit() && dp.size() >= 2 ? dp.size() - 2 : dp.size() - 1;
}

DrivePath drive_hsle(const ThetaDrift& drift, double theta0, std::uint64_t seed,
                     const Scheme& scheme, std::size_t path_index) {
  check_theta0(theta0);
  Scheme s = scheme;
  s.eps_start = theta0;
  s.record = true;
  return drive_from_theta(simulate_theta(drift, seed, s, path_index));
}

DrivePath drive_hsle(const Params& p, double theta0, std::uint64_t seed, const Scheme& scheme,
                     std::size_t path_index) {
  return drive_hsle(ThetaDrift(p), theta0, seed, scheme, path_index);
}

DrivePath drive_sle_kappa_rho(double kappa, double rho, double theta0, std::uint64_t seed,
                              const Scheme& scheme, std::size_t path_index) {
  if (!(kappa > 0.0)) throw DomainError("drive_sle_kappa_rho: kappa must be positive");
  check_theta0(theta0);
  Scheme s = scheme;
  s.eps_start = theta0;
  s.record = true;
  // dθ = (dW − dV)/2 = (√κ/2) dB + ((ρ+2)/4) cot θ dt
  const double k = (rho + 2.0) / 4.0;
  auto drift = [k](double th) { return k * std::cos(th) / std::sin(th); };
  return drive_from_theta(simulate_theta_with(drift, std::sqrt(kappa) / 2.0, seed, s, path_index));
}

Complex slit_inverse(Complex w, double W, double dt) {
  if (w == Complex(0.0)) return 0.0;
  const Complex rot = std::polar(1.0, W);
  const Complex u = w / rot;
  const Complex P = std::exp(dt) * (1.0 + u) * (1.0 + u) / u;
  // z² + (2 − P) z + 1 = 0; the roots multiply to 1
  const Complex B = P - 2.0;
  Complex disc = std::sqrt(B * B - 4.0);
  if (std::real(std::conj(B) * disc) < 0.0) disc = -disc;
  const Complex big = 0.5 * (B + disc);
  Complex z = 1.0 / big;
  if (std::abs(std::abs(big) - 1.0) <= 1e-8) {
    // both roots on the circle (w on the boundary away from the slit): keep
    // the one on w's side and hold it on the circle
    if (std::abs(big - u) < std::abs(z - u)) z = big;
    z /= std::abs(z);
  }
  return z * rot;
}

Complex trace_point_at(const DrivePath& dp, std::size_t k) {
  if (k >= dp.size()) throw DomainError("trace_point_at: index past the end of the path");
  Complex z = std::polar(1.0, dp.W[k]);
  for (std::size_t j = k; j-- > 0;) {
    z = slit_inverse(z, dp.W[j + 1], dp.times[j + 1] - dp.times[j]);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan};
    }
  }
  return z;
}

TracePoints trace_points(const DrivePath& dp, std::size_t n_points) {
  if (dp.size() == 0) throw DomainError("trace_points: empty driving path");
  if (n_points == 0) throw DomainError("trace_points: n_points must be >= 1");
  TracePoints tp;
  const std::size_t m = dp.size();
  const std::size_t n = std::min(n_points, m);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = n == 1 ? m - 1 : (i * (m - 1) + (n - 1) / 2) / (n - 1);
    const Complex z = trace_point_at(dp, k);
    const bool bad = !inside_closed_disk(z);
    tp.points.push_back(bad ? Complex(nan, nan) : z);
    tp.flagged.push_back(bad);
    tp.times.push_back(dp.times[k]);
    // each frozen-driver step contributes e^{−dt} to the derivative at 0
    tp.log_radius.push_back(-(dp.times[k] - dp.times[0]));
    if (bad) ++tp.flagged_count;
  }
  return tp;
}

const char* to_string(GeometryCase g) {
  switch (g) {
    case GeometryCase::case_i: return "case_i";
    case GeometryCase::case_ii: return "case_ii";
    case GeometryCase::case_iii: return "case_iii";
  }
  return "unknown";
}

GeometryCase classify_geometry(const Params& p) {
  if (p.b == Complex(0.0)) return GeometryCase::case_i;
  return p.nu >= 0.5 - p.kappa / 16.0 ? GeometryCase::case_ii : GeometryCase::case_iii;
}

const char* to_string(ConstructionCase c) {
  switch (c) {
    case ConstructionCase::ia: return "ia";
    case ConstructionCase::ib: return "ib";
    case ConstructionCase::ii: return "ii";
    case ConstructionCase::iiia: return "iiia";
    case ConstructionCase::iiib: return "iiib";
  }
  return "unknown";
}

double construction_beta_low(double kappa) { return (6.0 - kappa) / (2.0 * kappa); }

double construction_beta_high(double kappa) {
  return (12.0 - kappa) * (kappa + 4.0) / (16.0 * kappa);
}

ConstructionCase classify_construction(double kappa, const ExponentPair& ep) {
  if (!(kappa > 0.0 && kappa <= 4.0)) {
    throw RangeError(Violation::kappa_out_of_range, "classify_construction needs kappa in (0, 4]");
  }
  const double lo = construction_beta_low(kappa);
  const double hi = construction_beta_high(kappa);
  auto tol = [](double x) { return kConstructionTol * std::max(1.0, std::abs(x)); };
  if (ep.beta < lo - tol(lo)) {
    std::ostringstream os;
    os << "beta = " << ep.beta << " < (6-kappa)/(2kappa) = " << lo;
    throw RangeError(Violation::beta_below_threshold, os.str());
  }
  const double e = eta(kappa, ep.beta);
  if (ep.alpha > e + tol(e)) {
    std::ostringstream os;
    os << "alpha = " << ep.alpha << " > eta_kappa(beta) = " << e;
    throw RangeError(Violation::alpha_above_eta, os.str());
  }
  const bool on_low = std::abs(ep.beta - lo) <= tol(lo);
  if (std::abs(ep.alpha - e) <= tol(e)) return on_low ? ConstructionCase::ia : ConstructionCase::ib;
  if (ep.beta >= hi - tol(hi)) return ConstructionCase::ii;
  return on_low ? ConstructionCase::iiia : ConstructionCase::iiib;
}

std::array<double, 3> martingale_coefficient_identities(double kappa) {
  const double e2 = (6.0 - kappa) / (2.0 * kappa);
  const double c = central_charge(kappa);
  return {e2 * (1.0 - kappa) / 2.0 + e2 * e2 * kappa / 2.0 + c / 4.0,
          e2 * (kappa / 2.0 - 4.0 / 3.0) - c / 6.0, kappa / 4.0 - 1.5 + e2 * kappa / 2.0};
}

}  // namespace hsle
