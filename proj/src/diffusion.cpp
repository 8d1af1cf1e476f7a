#include "hsle/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "hsle/errors.hpp"

namespace hsle {
namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 path_stream(std::uint64_t seed, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                    0x68736c65u};
  return std::mt19937_64(seq);
}

void check_scheme(const Scheme& s) {
  if (!(s.dt.dt0 > 0.0) || !(s.dt.gamma > 0.0)) {
    throw DomainError("scheme: dt0 and gamma must be positive");
  }
  if (!(s.eps_start > 0.0) || !(s.eps_hit > 0.0) || s.eps_start + s.eps_hit >= kPi) {
    throw DomainError("scheme: need 0 < eps_start, 0 < eps_hit, eps_start + eps_hit < pi");
  }
  if (!(s.t_max > 0.0)) throw DomainError("scheme: t_max must be positive");
  if (s.bridge_depth < 0) throw DomainError("scheme: bridge_depth must be >= 0");
}

}  // namespace

ThetaDrift::ThetaDrift(const Params& p, bool direct, std::size_t nodes)
    : ev_(p), direct_(direct), sigma_(std::sqrt(p.kappa) / 2.0) {
  pole0_ = p.d;
  pole_pi_ = p.c - 1.0 - p.d;
  if (direct_ || ev_.b_zero()) return;
  if (nodes < 4) throw DomainError("ThetaDrift: need at least 4 cache nodes");
  const double lo = kCacheEdge, hi = kPi - kCacheEdge;
  mid_ = 0.5 * (lo + hi);
  half_ = 0.5 * (hi - lo);
  x_.resize(nodes);
  r_.resize(nodes);
  dr_.resize(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double th = mid_ - half_ * std::cos(kPi * static_cast<double>(j) / (nodes - 1.0));
    const GJet jt = ev_.jet(th);
    if (std::abs(jt.g) < 1e-300) throw NumericalError("ThetaDrift: G vanishes on the cache grid");
    const double s = jt.dg / jt.g;
    const double ds = jt.d2g / jt.g - s * s;
    x_[j] = th;
    r_[j] = s - singular(th);
    dr_[j] = ds - singular_deriv(th);
  }
  // guard the ends against rounding in cos
  x_.front() = lo;
  x_.back() = hi;
}

double ThetaDrift::singular(double theta) const {
  const double h = 0.5 * theta;
  return pole0_ * std::cos(h) / std::sin(h) + pole_pi_ * std::tan(h);
}

double ThetaDrift::singular_deriv(double theta) const {
  const double h = 0.5 * theta;
  const double s = std::sin(h), c = std::cos(h);
  return -0.5 * pole0_ / (s * s) + 0.5 * pole_pi_ / (c * c);
}

double ThetaDrift::log_deriv(double theta) const {
  if (ev_.b_zero()) return 2.0 * ev_.params().d * std::cos(theta) / std::sin(theta);
  if (direct_ || x_.empty() || theta < x_.front() || theta > x_.back()) {
    return g_log_deriv(ev_, theta);
  }
  const std::size_t n = x_.size();
  const double u = std::clamp((mid_ - theta) / half_, -1.0, 1.0);
  auto j = static_cast<std::size_t>(std::acos(u) * (n - 1.0) / kPi);
  j = std::min(j, n - 2);
  // acos rounding can put θ one cell off
  if (theta < x_[j] && j > 0) --j;
  if (theta > x_[j + 1] && j + 2 < n) ++j;
  const double h = x_[j + 1] - x_[j];
  const double t = (theta - x_[j]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double r = h00 * r_[j] + h10 * h * dr_[j] + h01 * r_[j + 1] + h11 * h * dr_[j + 1];
  return r + singular(theta);
}

double ThetaDrift::operator()(double theta) const {
  return params().kappa / 4.0 * log_deriv(theta) + 0.5 * std::cos(theta) / std::sin(theta);
}

namespace {

enum class StepOutcome { inside, hit };

template <class Drift>
struct Stepper {
  const Drift& drift;
  double sigma;
  const Scheme& scheme;
  std::mt19937_64& rng;
  std::normal_distribution<double>& normal;
  DiffusionPath& path;
  double theta;
  double t;
  double hit_level;

  void push() {
    ++path.steps;
    if (scheme.record) {
      path.times.push_back(t);
      path.thetas.push_back(theta);
    }
  }

  // One Euler step of length dt driven by the Brownian increment dw.
  StepOutcome step(double dt, double dw, int depth) {
    const double next = theta + drift(theta) * dt + sigma * dw;
    if (next >= hit_level) {
      t += dt;
      theta = kPi;
      push();
      return StepOutcome::hit;
    }
    if (next > 0.0 && std::isfinite(next)) {
      t += dt;
      theta = next;
      push();
      return StepOutcome::inside;
    }
    if (depth >= scheme.bridge_depth) {
      std::ostringstream os;
      os << "theta left (0, pi) through 0 at t = " << t << " (theta = " << theta
         << ", dt = " << dt << ") after " << depth << " bridge halvings";
      throw NumericalError(os.str());
    }
    ++path.refinements;
    // W at the midpoint given W(dt) = dw is N(dw/2, dt/4).
    const double dw1 = 0.5 * dw + std::sqrt(0.25 * dt) * normal(rng);
    if (step(0.5 * dt, dw1, depth + 1) == StepOutcome::hit) return StepOutcome::hit;
    return step(0.5 * dt, dw - dw1, depth + 1);
  }
};

template <class Drift>
DiffusionPath simulate_core(const Drift& drift, double sigma, std::uint64_t seed,
                            const Scheme& scheme, std::size_t path_index) {
  check_scheme(scheme);
  DiffusionPath path;
  path.rng_seed = seed;
  path.path_index = path_index;
  auto rng = path_stream(seed, path_index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Stepper<Drift> st{drift, sigma, scheme, rng, normal, path, scheme.eps_start, 0.0,
                    kPi - scheme.eps_hit};
  if (scheme.record) {
    path.times.push_back(0.0);
    path.thetas.push_back(st.theta);
  }
  while (st.t < scheme.t_max) {
    const double dist = std::min(st.theta, kPi - st.theta);
    double dt = std::min(scheme.dt.dt0, scheme.dt.gamma * dist * dist);
    dt = std::min(dt, scheme.t_max - st.t);
    if (!(dt > 0.0)) break;
    const double dw = std::sqrt(dt) * normal(rng);
    if (st.step(dt, dw, 0) == StepOutcome::hit) {
      path.hit_time = st.t;
      return path;
    }
  }
  return path;
}

}  // namespace

DiffusionPath simulate_theta(const ThetaDrift& drift, std::uint64_t seed, const Scheme& scheme,
                             std::size_t path_index) {
  return simulate_core(drift, drift.sigma(), seed, scheme, path_index);
}

DiffusionPath simulate_theta_with(const std::function<double(double)>& drift, double sigma,
                                  std::uint64_t seed, const Scheme& scheme,
                                  std::size_t path_index) {
  if (!(sigma > 0.0)) throw DomainError("simulate_theta_with: sigma must be positive");
  return simulate_core(drift, sigma, seed, scheme, path_index);
}

DiffusionPath simulate_theta(const Params& p, std::uint64_t seed, const Scheme& scheme,
                             std::size_t path_index) {
  return simulate_theta(ThetaDrift(p), seed, scheme, path_index);
}

HittingSample sample_hitting_times(const ThetaDrift& drift, std::size_t n_paths,
                                   std::uint64_t seed, const Scheme& scheme, unsigned threads) {
  if (n_paths == 0) throw DomainError("sample_hitting_times: n_paths must be >= 1");
  check_scheme(scheme);
  Scheme quiet = scheme;
  quiet.record = false;
  HittingSample hs;
  hs.values.assign(n_paths, kNotHit);
  hs.count = n_paths;
  hs.seed = seed;
  hs.scheme = scheme;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_paths));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < n_paths; i += threads) {
        try {
          hs.values[i] = simulate_theta(drift, seed, quiet, i).hit_time;
        } catch (const NumericalError& e) {
          std::ostringstream os;
          os << "path " << i << ": " << e.what();
          throw NumericalError(os.str());
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  hs.censored = static_cast<std::size_t>(std::count(hs.values.begin(), hs.values.end(), kNotHit));
  return hs;
}

HittingSample sample_hitting_times(const Params& p, std::size_t n_paths, std::uint64_t seed,
                                   const Scheme& scheme, unsigned threads) {
  return sample_hitting_times(ThetaDrift(p), n_paths, seed, scheme, threads);
}

std::vector<SurvivalPoint> empirical_survival(const HittingSample& hs,
                                              std::span<const double> t_grid) {
  if (hs.values.empty()) throw DomainError("empirical_survival: empty sample");
  std::vector<double> sorted = hs.values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<SurvivalPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    const double p = static_cast<double>(above) / n;
    out.push_back({t, p, kZ99 * std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

double bessel_dimension(const Params& p, Boundary where) {
  return where == Boundary::zero ? 2.0 + 4.0 * p.q2 : 2.0 - 4.0 * p.q2;
}

double log_x_drift_constant(const Params& p) { return p.kappa * p.q2 / 2.0 - 0.5; }

double phase_threshold_nu(double kappa) { return 0.5 - kappa / 16.0; }

double log_x_drift(const ThetaDrift& drift, double theta) {
  const double s = std::sin(theta);
  const double cot = std::cos(theta) / s;
  const double kappa = drift.params().kappa;
  return -0.5 / (s * s) - 0.5 * cot * (0.5 * kappa * drift.log_deriv(theta) + cot) +
         (1.0 + cot * cot) * kappa / 8.0;
}

LogXEstimate simulate_log_x(const ThetaDrift& drift, const DiffusionPath& path, double window) {
  if (!path.hit()) throw DomainError("simulate_log_x: path did not reach pi");
  if (path.thetas.size() < 3 || path.times.size() != path.thetas.size()) {
    throw DomainError("simulate_log_x: path was not recorded");
  }
  if (!(window > 0.0)) throw DomainError("simulate_log_x: window must be positive");
  LogXEstimate out;
  double drift_sum = 0.0, noisy_sum = 0.0;
  // The last step is clipped to π, so its increment carries no noise information.
  const std::size_t last = path.thetas.size() - 2;
  for (std::size_t k = 0; k < last; ++k) {
    const double th = path.thetas[k];
    const double dt = path.times[k + 1] - path.times[k];
    const double cot = std::cos(th) / std::sin(th);
    const double dx = log_x_drift(drift, th) * dt;
    // (√κ/2) dB recovered from the θ increment; d log X carries −cot·(√κ/2) dB.
    const double noise = -cot * (path.thetas[k + 1] - th - drift(th) * dt);
    out.log_x_change += dx + noise;
    if (kPi - th < window) {
      drift_sum += dx;
      noisy_sum += dx + noise;
      out.time_change += cot * cot * dt;
      ++out.window_steps;
    }
  }
  if (out.window_steps < 2 || !(out.time_change > 0.0)) {
    throw DomainError("simulate_log_x: fewer than two steps inside the window");
  }
  out.drift_estimate = drift_sum / out.time_change;
  out.noisy_estimate = noisy_sum / out.time_change;
  return out;
}

}  // namespace hsle
