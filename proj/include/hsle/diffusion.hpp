#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hsle/gfunc.hpp"
#include "hsle/params.hpp"

namespace hsle {

/// Drift of dθ = (√κ/2) dB + [(κ/4) G′/G + ½ cot θ] dt.
///
/// G′/G is cached on Chebyshev–Lobatto nodes in [1e-5, π−1e-5] after
/// subtracting its boundary poles d·cot(θ/2) + (c−1−d)·tan(θ/2), and the
/// remainder is interpolated by cubic Hermite pieces. Outside the node range,
/// or with direct = true, G′/G is evaluated from the hypergeometric form.
/// For b = 0 the exact 2d·cot θ is used and no cache is built.
class ThetaDrift {
 public:
  static constexpr std::size_t kDefaultNodes = 10000;
  static constexpr double kCacheEdge = 1e-5;

  explicit ThetaDrift(const Params& p, bool direct = false,
                      std::size_t nodes = kDefaultNodes);

  const Params& params() const noexcept { return ev_.params(); }
  const GEvaluator& evaluator() const noexcept { return ev_; }
  bool direct() const noexcept { return direct_; }

  /// G′(θ)/G(θ).
  double log_deriv(double theta) const;

  /// Full θ drift.
  double operator()(double theta) const;

  /// Diffusion coefficient √κ/2.
  double sigma() const noexcept { return sigma_; }

 private:
  double singular(double theta) const;
  double singular_deriv(double theta) const;

  GEvaluator ev_;
  bool direct_;
  double sigma_;
  double pole0_ = 0.0;   // d
  double pole_pi_ = 0.0; // c − 1 − d
  double mid_ = 0.0;
  double half_ = 0.0;
  std::vector<double> x_;
  std::vector<double> r_;
  std::vector<double> dr_;
};

struct StepPolicy {
  double dt0 = 1e-3;
  double gamma = 0.1;  // dt = min(dt0, gamma · min(θ, π−θ)²)
};

struct Scheme {
  StepPolicy dt;
  double eps_start = 1e-3;
  double eps_hit = 1e-4;
  double t_max = 50.0;
  int bridge_depth = 30;  // halvings allowed when a step lands at θ ≤ 0
  bool record = true;     // keep the full (t, θ) path
};

inline constexpr double kNotHit = std::numeric_limits<double>::infinity();

struct DiffusionPath {
  std::vector<double> times;
  std::vector<double> thetas;
  double hit_time = kNotHit;  // first grid time with θ ≥ π − eps_hit
  std::uint64_t rng_seed = 0;
  std::size_t path_index = 0;
  std::size_t steps = 0;
  std::size_t refinements = 0;  // bridge halvings performed

  bool hit() const noexcept { return hit_time != kNotHit; }
};

/// Euler–Maruyama path from θ = eps_start until θ ≥ π − eps_hit (recorded
/// as θ = π) or t_max. The Gaussian stream is a deterministic function of
/// (seed, path_index). A step that lands at θ ≤ 0 is split with a Brownian
/// bridge; if that fails bridge_depth times a NumericalError is thrown.
DiffusionPath simulate_theta(const ThetaDrift& drift, std::uint64_t seed, const Scheme& scheme,
                             std::size_t path_index = 0);
DiffusionPath simulate_theta(const Params& p, std::uint64_t seed, const Scheme& scheme,
                             std::size_t path_index = 0);

/// The same stepper for dθ = sigma dB + drift(θ) dt.
DiffusionPath simulate_theta_with(const std::function<double(double)>& drift, double sigma,
                                  std::uint64_t seed, const Scheme& scheme,
                                  std::size_t path_index = 0);

struct HittingSample {
  std::vector<double> values;  // kNotHit for paths censored at t_max
  std::size_t count = 0;
  std::size_t censored = 0;
  std::uint64_t seed = 0;
  Scheme scheme;
};

/// n_paths independent hitting times, path i driven by stream (seed, i).
/// threads = 0 picks the hardware concurrency. Results do not depend on
/// the thread count.
HittingSample sample_hitting_times(const Params& p, std::size_t n_paths, std::uint64_t seed,
                                   const Scheme& scheme, unsigned threads = 0);
HittingSample sample_hitting_times(const ThetaDrift& drift, std::size_t n_paths,
                                   std::uint64_t seed, const Scheme& scheme,
                                   unsigned threads = 0);

struct SurvivalPoint {
  double t = 0.0;
  double estimate = 0.0;
  double ci_halfwidth = 0.0;  // 99% Wald interval
};

inline constexpr double kZ99 = 2.5758293035489004;

std::vector<SurvivalPoint> empirical_survival(const HittingSample& hs,
                                              std::span<const double> t_grid);

enum class Boundary { zero, pi };

/// Local Bessel dimension: 2 + 4q₂ at 0, 2 − 4q₂ at π.
double bessel_dimension(const Params& p, Boundary where);

/// κq₂/2 − ½, the limiting drift of log X in the cot²-time change.
double log_x_drift_constant(const Params& p);

/// ν at which log_x_drift_constant changes sign: ½ − κ/16.
double phase_threshold_nu(double kappa);

struct LogXEstimate {
  double drift_estimate = 0.0;  // ∫ D dt / ∫ cot²θ dt over the final window
  double noisy_estimate = 0.0;  // same with the martingale part included
  double log_x_change = 0.0;    // Δ log X over the whole path
  double time_change = 0.0;     // ∫ cot²θ dt over the window
  std::size_t window_steps = 0;
};

/// d log X drift −1/(2 sin²θ) − (cot θ/2)((κ/2)G′/G + cot θ) + (1 + cot²θ)κ/8.
double log_x_drift(const ThetaDrift& drift, double theta);

/// Integrates d log X along a recorded θ path. The window is the part of the
/// path with π − θ < window before the hit. Throws DomainError if the path
/// never hit π, was not recorded, or has fewer than two steps in the window.
LogXEstimate simulate_log_x(const ThetaDrift& drift, const DiffusionPath& path,
                            double window = 1e-2);

}  // namespace hsle
