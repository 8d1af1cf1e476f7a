#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hsle/diffusion.hpp"
#include "hsle/exponents.hpp"
#include "hsle/loewner.hpp"
#include "hsle/params.hpp"

namespace hsle {

const char* version_string();

using Cell = std::variant<double, std::string>;

/// Rectangular table with per-column provenance notes. A column that may
/// hold NaN must be paired with a flag column (registered in nan_flags).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, std::string> provenance;  // column -> formula it came from
  std::map<std::string, std::string> nan_flags;   // column -> its flag column

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;

  /// Throws DomainError on a ragged row or an unflagged NaN.
  void validate() const;
};

/// RFC-4180 CSV. Numbers use %.17g (nan/inf spelled out), text fields are
/// quoted only when needed. Provenance goes into leading '#' lines unless
/// with_metadata is false.
void write_csv(const ResultTable& t, std::ostream& os, bool with_metadata = true);
std::string to_csv(const ResultTable& t, bool with_metadata = true);

enum class InputMode { mu_nu, alpha_beta };

/// Everything needed to rerun a command and get byte-identical output.
struct RunManifest {
  std::string command;
  InputMode mode = InputMode::mu_nu;
  double kappa = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double dt0 = 1e-3;
  double gamma = 0.1;
  double eps_start = 1e-3;
  double eps_hit = 1e-4;
  double t_max = 50.0;
  std::uint64_t n_paths = 0;
  std::uint64_t trunc_n = kDefaultTruncation;
  std::uint64_t n_max = 0;
  std::uint64_t n_points = 0;
  bool r_mode = false;
  std::vector<double> grid;          // t (or R) grid for survival
  std::vector<double> kappa_list;    // verify
  std::string version = version_string();
  std::map<std::string, std::string> info;  // informational, e.g. the trace classification

  Scheme scheme() const;
  void set_scheme(const Scheme& s);

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

/// Params for either input mode of a manifest.
Params manifest_params(const RunManifest& m);

/// n, η^n, λ_n, a_n for n = 0..n_max. a_n is the product truncated at
/// n_max (these sum to 1); a_n_limit is the untruncated coefficient used by
/// the survival series. With b = 0 the law is degenerate (T = ∞) and both
/// are (1, 0, 0, ...).
ResultTable cmd_exponent(double kappa, double alpha, double beta, std::size_t n_max);

struct SurvivalRun {
  std::vector<double> grid;  // t values, or R values in r_mode
  bool r_mode = false;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  Scheme scheme;
  std::size_t trunc_n = kDefaultTruncation;
  unsigned threads = 0;
};

struct SurvivalResult {
  ResultTable table;
  HittingSample sample;
};

/// Per grid point: series value, its remainder, empirical survival with its
/// 99% half-width and z = (empirical − series)/σ with σ² = p(1−p)/n from the
/// series value p.
SurvivalResult cmd_survival(const Params& p, const SurvivalRun& run);

/// path_index, T (inf when censored).
ResultTable sample_table(const HittingSample& hs);

/// Default κ grid for cmd_verify.
std::vector<double> default_verify_kappas();

/// One row per (κ, check): ODE residual, C₁ = −C₂, martingale identities,
/// eigen_solve vs closed-form λ, and the two λ forms. Failures are rows.
ResultTable cmd_verify(const std::vector<double>& kappas);

/// True when every status cell is "pass" or "skip".
bool verify_passed(const ResultTable& t);

struct TraceRun {
  std::uint64_t seed = 0;
  Scheme scheme;  // eps_start is the starting θ
  std::size_t n_points = 200;
};

struct TraceResult {
  ResultTable trace;  // t, re, im, flag, log_radius
  ResultTable drive;  // t, W, V, theta
  GeometryCase classification = GeometryCase::case_i;
  double hit_time = kNotHit;
};

/// One hSLE trace from the driving pair of drive_hsle.
TraceResult cmd_trace(const Params& p, const TraceRun& run);

/// Writes the trace CSV to out_path and the manifest next to it
/// (manifest_path_for). I/O failures throw DomainError naming the path.
void write_trace_files(const TraceResult& r, const RunManifest& m, const std::string& out_path);

/// foo.csv -> foo.manifest.json
std::string manifest_path_for(const std::string& out_path);

/// Writes text to path, throwing DomainError with the path on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hsle
