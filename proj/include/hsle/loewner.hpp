#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsle/diffusion.hpp"
#include "hsle/params.hpp"
#include "hsle/special_fn.hpp"

namespace hsle {

/// Driving pair of a radial Loewner chain with a marked boundary point
/// x_t = e^{iV_t}; θ = (W − V)/2 holds exactly at every grid point.
struct DrivePath {
  std::vector<double> times;
  std::vector<double> W;
  std::vector<double> V;
  std::vector<double> theta;
  double hit_time = kNotHit;
  std::uint64_t rng_seed = 0;
  std::size_t path_index = 0;
  std::size_t swallowed_steps = 0;  // steps whose frozen-driver slit reached the marked point

  bool hit() const noexcept { return hit_time != kNotHit; }
  std::size_t size() const noexcept { return times.size(); }
};

/// Builds (W, V) from a recorded θ path with W_0 = 0 and V_0 = −2θ_0. Each V
/// step is the exact image of the marked point under the slit map with the
/// driver frozen at W_{k+1} (first order: dV = −cot θ dt), so g_t^{-1}(e^{iV_t})
/// stays at e^{−2iθ_0} in the discrete chain up to roundoff, which the inverse
/// maps amplify as θ approaches π.
DrivePath drive_from_theta(const DiffusionPath& path);

/// Last grid index before the hit (the final hit point is clamped to θ = π).
std::size_t terminal_index(const DrivePath& dp);

/// hSLE driving pair: dW = √κ dB + (κ/2) G′/G dt. The θ component is the
/// simulate_theta path with eps_start = theta0 and the same (seed, index).
DrivePath drive_hsle(const ThetaDrift& drift, double theta0, std::uint64_t seed,
                     const Scheme& scheme, std::size_t path_index = 0);
DrivePath drive_hsle(const Params& p, double theta0, std::uint64_t seed, const Scheme& scheme,
                     std::size_t path_index = 0);

/// Radial SLE_κ(ρ) driving pair: dW = √κ dB + (ρ/2) cot θ dt.
DrivePath drive_sle_kappa_rho(double kappa, double rho, double theta0, std::uint64_t seed,
                              const Scheme& scheme, std::size_t path_index = 0);

/// Inverse of the radial Loewner flow ∂g = g(e^{iW}+g)/(e^{iW}−g) run for
/// time dt with the driver frozen at W. Along that flow (1+g)²/g · e^{t}
/// is conserved (after rotating the driver to 1), so the preimage solves a
/// quadratic; the root inside the disk is returned.
Complex slit_inverse(Complex w, double W, double dt);

struct TracePoints {
  std::vector<Complex> points;   // NaN where flagged
  std::vector<double> times;
  std::vector<bool> flagged;     // blow-up or left the closed disk
  std::vector<double> log_radius; // log |(g_t^{-1})′(0)| = −t
  std::size_t flagged_count = 0;
};

/// γ(t_k) ≈ g_{t_k}^{-1}(e^{iW_{t_k}}) at n_points grid indices spread evenly
/// over the path, by backward composition of slit_inverse with the driver of
/// each step frozen at its right end.
TracePoints trace_points(const DrivePath& dp, std::size_t n_points);

/// The single point γ(t_k) at grid index k; NaN if the composition blew up.
Complex trace_point_at(const DrivePath& dp, std::size_t k);

enum class GeometryCase { case_i, case_ii, case_iii };
const char* to_string(GeometryCase g);

/// i: b = 0; ii: b ≠ 0 and ν ≥ ½ − κ/16; iii otherwise.
GeometryCase classify_geometry(const Params& p);

enum class ConstructionCase { ia, ib, ii, iiia, iiib };
const char* to_string(ConstructionCase c);

inline constexpr double kConstructionTol = 1e-12;

/// (6−κ)/(2κ) and (12−κ)(κ+4)/(16κ).
double construction_beta_low(double kappa);
double construction_beta_high(double kappa);

/// Which branch of the restriction-set construction (α, β) falls in.
/// Equalities are decided with kConstructionTol. Throws RangeError when
/// β < (6−κ)/(2κ) or α > η_κ(β).
ConstructionCase classify_construction(double kappa, const ExponentPair& ep);

/// Residuals of the three κ-only identities satisfied by e₂ = (6−κ)/(2κ) and
/// c(κ) in the martingale computation:
///   e₂(1−κ)/2 + e₂²κ/2 + c/4,  e₂(κ/2 − 4/3) − c/6,  κ/4 − 3/2 + e₂κ/2.
std::array<double, 3> martingale_coefficient_identities(double kappa);

}  // namespace hsle
