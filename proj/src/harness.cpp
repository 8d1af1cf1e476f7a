#include "hsle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "hsle/errors.hpp"
#include "hsle/gfunc.hpp"
#include "json.hpp"

#ifndef HSLE_VERSION
#define HSLE_VERSION "0.0.0"
#endif

namespace hsle {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) return format_number(*x);
  return quote_field(std::get<std::string>(c));
}

const char* mode_name(InputMode m) { return m == InputMode::mu_nu ? "mu_nu" : "alpha_beta"; }

InputMode mode_from_name(const std::string& s) {
  if (s == "mu_nu") return InputMode::mu_nu;
  if (s == "alpha_beta") return InputMode::alpha_beta;
  throw DomainError("manifest: unknown input mode '" + s + "'");
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

const char* version_string() { return "hsle " HSLE_VERSION; }

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("ResultTable: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows.at(row).at(column_index(column));
  if (const double* x = std::get_if<double>(&c)) return *x;
  throw DomainError("ResultTable: column '" + column + "' is not numeric");
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const {
  const Cell& c = rows.at(row).at(column_index(column));
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  throw DomainError("ResultTable: column '" + column + "' is not text");
}

void ResultTable::validate() const {
  for (const auto& [col, flag] : nan_flags) {
    column_index(col);
    column_index(flag);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size()) {
      throw DomainError("ResultTable: row " + std::to_string(r) + " is ragged");
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double* x = std::get_if<double>(&rows[r][c]);
      if (x && std::isnan(*x) && !nan_flags.contains(columns[c])) {
        throw DomainError("ResultTable: NaN in column '" + columns[c] + "' without a flag column");
      }
    }
  }
}

void write_csv(const ResultTable& t, std::ostream& os, bool with_metadata) {
  t.validate();
  if (with_metadata) {
    for (const auto& col : t.columns) {
      const auto it = t.provenance.find(col);
      if (it != t.provenance.end()) os << "# " << col << ": " << it->second << "\r\n";
    }
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << quote_field(t.columns[c]);
  }
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
    os << "\r\n";
  }
}

std::string to_csv(const ResultTable& t, bool with_metadata) {
  std::ostringstream os;
  write_csv(t, os, with_metadata);
  return os.str();
}

Scheme RunManifest::scheme() const {
  Scheme s;
  s.dt.dt0 = dt0;
  s.dt.gamma = gamma;
  s.eps_start = eps_start;
  s.eps_hit = eps_hit;
  s.t_max = t_max;
  return s;
}

void RunManifest::set_scheme(const Scheme& s) {
  dt0 = s.dt.dt0;
  gamma = s.dt.gamma;
  eps_start = s.eps_start;
  eps_hit = s.eps_hit;
  t_max = s.t_max;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["mode"] = mode_name(m.mode);
  j["kappa"] = m.kappa;
  j["mu"] = m.mu;
  j["nu"] = m.nu;
  j["alpha"] = m.alpha;
  j["beta"] = m.beta;
  j["seed"] = m.seed;
  j["scheme"] = {{"dt0", m.dt0},           {"gamma", m.gamma},     {"eps_start", m.eps_start},
                 {"eps_hit", m.eps_hit},   {"t_max", m.t_max},     {"n_paths", m.n_paths},
                 {"trunc_n", m.trunc_n}};
  j["n_max"] = m.n_max;
  j["n_points"] = m.n_points;
  j["r_mode"] = m.r_mode;
  j["grid"] = m.grid;
  j["kappa_list"] = m.kappa_list;
  j["version"] = m.version;
  j["info"] = m.info;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.mode = mode_from_name(j.at("mode").get<std::string>());
    m.kappa = j.at("kappa").get<double>();
    m.mu = j.at("mu").get<double>();
    m.nu = j.at("nu").get<double>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const json& s = j.at("scheme");
    m.dt0 = s.at("dt0").get<double>();
    m.gamma = s.at("gamma").get<double>();
    m.eps_start = s.at("eps_start").get<double>();
    m.eps_hit = s.at("eps_hit").get<double>();
    m.t_max = s.at("t_max").get<double>();
    m.n_paths = s.at("n_paths").get<std::uint64_t>();
    m.trunc_n = s.at("trunc_n").get<std::uint64_t>();
    m.n_max = j.at("n_max").get<std::uint64_t>();
    m.n_points = j.at("n_points").get<std::uint64_t>();
    m.r_mode = j.at("r_mode").get<bool>();
    m.grid = j.at("grid").get<std::vector<double>>();
    m.kappa_list = j.at("kappa_list").get<std::vector<double>>();
    m.version = j.at("version").get<std::string>();
    m.info = j.at("info").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw DomainError("write to '" + path + "' failed");
}

void save_manifest(const RunManifest& m, const std::string& path) {
  write_text_file(path, manifest_to_json(m));
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return manifest_from_json(ss.str());
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string manifest_path_for(const std::string& out_path) {
  const auto slash = out_path.find_last_of('/');
  const auto dot = out_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? out_path.substr(0, dot) : out_path) + ".manifest.json";
}

Params manifest_params(const RunManifest& m) {
  if (m.mode == InputMode::alpha_beta) {
    return params_from_exponents(m.kappa, {m.alpha, m.beta});
  }
  return make_params(m.kappa, m.mu, m.nu);
}

ResultTable cmd_exponent(double kappa, double alpha, double beta, std::size_t n_max) {
  const Params p = params_from_exponents(kappa, {alpha, beta});
  ResultTable t;
  t.columns = {"n", "eta_n", "lambda_n", "a_n", "a_n_limit"};
  t.provenance = {
      {"eta_n", "exponent sequence eta^n_kappa(alpha, beta), closed form"},
      {"lambda_n", "lambda_n(kappa, mu, nu), closed form"},
      {"a_n", "a_n = prod_{k <= n_max, k != n} (1 - lambda_n/lambda_k)^-1"},
      {"a_n_limit", "the same product over all k (long product with tail correction)"}};
  const std::size_t N = n_max + 1;
  std::vector<double> trunc(N, 0.0), limit(N, 0.0);
  if (p.b == Complex(0.0)) {
    trunc[0] = limit[0] = 1.0;  // λ₀ = 0: T = ∞ almost surely
  } else {
    const auto lam = lambda_sequence(p, N);
    for (std::size_t n = 0; n < N; ++n) trunc[n] = coeff_a_n(lam, n, N, kappa).value;
    const auto se = build_spectral_expansion(p, N);
    std::copy_n(se.coeffs.begin(), N, limit.begin());
  }
  for (std::size_t n = 0; n < N; ++n) {
    const int k = static_cast<int>(n);
    t.add_row({static_cast<double>(n), eta_n(kappa, alpha, beta, k), lambda_n(p, k), trunc[n],
               limit[n]});
  }
  return t;
}

SurvivalResult cmd_survival(const Params& p, const SurvivalRun& run) {
  std::vector<double> ts;
  for (double g : run.grid) {
    if (run.r_mode ? !(g >= 1.0) : !(g >= 0.0)) {
      throw DomainError(run.r_mode ? "survival: R values must be >= 1"
                                   : "survival: t values must be >= 0");
    }
    ts.push_back(run.r_mode ? std::log(g) : g);
  }
  SurvivalResult out;
  ResultTable& t = out.table;
  if (run.r_mode) t.columns.push_back("R");
  for (const char* c : {"t", "series", "series_remainder", "truncation_warning", "empirical",
                        "ci_halfwidth", "z", "z_flag"}) {
    t.columns.push_back(c);
  }
  t.provenance = {{"series", "sum_n a_n exp(-lambda_n t), truncated eigen-expansion"},
                  {"series_remainder", "size of the omitted terms of the eigen-expansion"},
                  {"empirical", "fraction of simulated paths with T > t"},
                  {"ci_halfwidth", "99% Wald interval half-width"},
                  {"z", "(empirical - series) / sqrt(series (1 - series) / n_paths)"}};
  if (run.r_mode) t.provenance["t"] = "t = ln R, disconnection probability P(L < 1/R) = P(T > ln R)";
  t.nan_flags = {{"empirical", "z_flag"}, {"ci_halfwidth", "z_flag"}, {"z", "z_flag"}};

  std::optional<SpectralExpansion> se;
  if (p.b != Complex(0.0)) se = build_spectral_expansion(p, run.trunc_n);

  std::vector<SurvivalPoint> emp;
  if (run.n_paths > 0) {
    out.sample = sample_hitting_times(ThetaDrift(p), run.n_paths, run.seed, run.scheme, run.threads);
    emp = empirical_survival(out.sample, ts);
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    SeriesValue sv;
    if (se) {
      sv = survival_series(*se, ts[i]);
    } else {
      sv.value = 1.0;  // b = 0: the hitting time is infinite
    }
    double e = kNaN, ci = kNaN, z = kNaN;
    if (!emp.empty()) {
      e = emp[i].estimate;
      ci = emp[i].ci_halfwidth;
      const double q = std::clamp(sv.value, 0.0, 1.0);
      const double sd = std::sqrt(q * (1.0 - q) / static_cast<double>(run.n_paths));
      if (sd > 0.0) z = (e - sv.value) / sd;
    }
    std::vector<Cell> row;
    if (run.r_mode) row.emplace_back(run.grid[i]);
    for (double v : {ts[i], sv.value, sv.remainder, as_flag(sv.truncation_warning), e, ci, z,
                     as_flag(std::isnan(z))}) {
      row.emplace_back(v);
    }
    t.add_row(std::move(row));
  }
  return out;
}

ResultTable sample_table(const HittingSample& hs) {
  ResultTable t;
  t.columns = {"path_index", "T"};
  t.provenance = {{"T", "first grid time with theta >= pi - eps_hit; inf when censored at t_max"}};
  for (std::size_t i = 0; i < hs.values.size(); ++i) {
    t.add_row({static_cast<double>(i), hs.values[i]});
  }
  return t;
}

std::vector<double> default_verify_kappas() { return {1.0, 2.0, 8.0 / 3.0, 3.0, 4.0}; }

ResultTable cmd_verify(const std::vector<double>& kappas) {
  ResultTable t;
  t.columns = {"kappa", "param_set", "mu", "nu", "check", "max_residual", "tolerance", "status",
               "source"};
  t.provenance = {{"max_residual", "largest scaled residual of the check named in 'source'"}};
  t.nan_flags = {{"mu", "param_set"}, {"nu", "param_set"}, {"max_residual", "status"}};

  auto add = [&](double kappa, const std::string& set, double mu, double nu,
                 const std::string& check, double resid, double tol, const std::string& source,
                 bool skip = false) {
    const std::string status = skip ? "skip" : (resid <= tol ? "pass" : "fail");
    t.add_row({kappa, set, mu, nu, check, resid, tol, status, source});
  };
  // Failures inside a check become fail rows rather than exceptions.
  auto guarded = [](auto&& f) {
    try {
      return f();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  for (double kappa : kappas) {
    double mart = guarded([&] {
      double r = 0.0;
      for (double x : martingale_coefficient_identities(kappa)) r = std::max(r, std::abs(x));
      return r;
    });
    add(kappa, "kappa_only", kNaN, kNaN, "martingale_identities", mart, 1e-12,
        "kappa-only coefficient identities of the martingale computation");

    const double nu = 0.5;
    double ub = kNaN;
    try {
      ub = mu_upper_bound(kappa, nu);
    } catch (const std::exception&) {
      add(kappa, "kappa_only", kNaN, kNaN, "parameters", std::numeric_limits<double>::infinity(),
          0.0, "admissible parameter range");
      continue;
    }
    const double mu_complex = -(4.0 - kappa) * (4.0 - kappa) / (16.0 * kappa) - 0.2;
    const std::vector<std::pair<std::string, double>> sets = {
        {"real", std::max(ub - 0.25, mu_complex + 0.15)}, {"complex", mu_complex}, {"b_zero", ub}};
    for (const auto& [name, mu] : sets) {
      Params p;
      try {
        p = make_params(kappa, mu, nu);
      } catch (const std::exception&) {
        add(kappa, name, mu, nu, "parameters", std::numeric_limits<double>::infinity(), 0.0,
            "admissible parameter range");
        continue;
      }
      const GEvaluator ev(p);
      const bool b_zero = ev.b_zero();

      double ode = guarded([&] {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
          const double th = 0.05 + (std::numbers::pi - 0.1) * i / 199.0;
          const double s = std::sin(th);
          worst = std::max(worst,
                           std::abs(ode_residual(ev, th)) / (1.0 + std::abs(p.e) + nu / (s * s)));
        }
        return worst;
      });
      add(kappa, name, mu, nu, "ode_residual", ode, 1e-6,
          "(kappa/8) G'' + (cot/2) G' + (e - nu/(2 sin^2)) G = 0 on 200 points");

      const C2Constant k = c2_constant(p.a, p.b, p.c);
      if (k.infinite) {
        add(kappa, name, mu, nu, "c1_plus_c2", kNaN, 1e-10, "C1 + C2 = 0 at the pi end", true);
      } else {
        add(kappa, name, mu, nu, "c1_plus_c2",
            std::abs(k.c1 + k.value) / std::max(1.0, std::abs(k.value)), 1e-10,
            "C1 + C2 = 0 at the pi end");
      }

      if (b_zero) {
        add(kappa, name, mu, nu, "eigen_vs_closed_form", kNaN, 1e-6,
            "zeros of lambda -> f_lambda(pi) vs closed-form lambda_n (needs b != 0)", true);
      } else {
        double eig = guarded([&] {
          const auto roots = eigen_solve(ev, 4);
          double r = 0.0;
          for (int n = 0; n < 4; ++n) r = std::max(r, std::abs(roots[n] - lambda_n(p, n)));
          return r;
        });
        add(kappa, name, mu, nu, "eigen_vs_closed_form", eig, 1e-6,
            "zeros of lambda -> f_lambda(pi) vs closed-form lambda_n, n < 4");
      }

      double forms = guarded([&] {
        const ExponentPair ep = exponents_from_mu_nu(p);
        double r = 0.0;
        for (int n = 0; n < 5; ++n) {
          const double l = lambda_n(p, n);
          r = std::max(r, std::abs(l - eta_n(kappa, ep.alpha, ep.beta, n)) / std::max(1.0, l));
        }
        return r;
      });
      add(kappa, name, mu, nu, "lambda_two_forms", forms, 1e-12,
          "lambda_n(kappa, mu, nu) vs eta^n_kappa(alpha, beta), n < 5");
    }
  }
  return t;
}

bool verify_passed(const ResultTable& t) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& s = t.text(r, "status");
    if (s != "pass" && s != "skip") return false;
  }
  return true;
}

TraceResult cmd_trace(const Params& p, const TraceRun& run) {
  if (run.n_points == 0) throw DomainError("trace: n_points must be >= 1");
  TraceResult out;
  const DrivePath dp = drive_hsle(ThetaDrift(p), run.scheme.eps_start, run.seed, run.scheme, 0);
  const TracePoints tp = trace_points(dp, run.n_points);
  out.classification = classify_geometry(p);
  out.hit_time = dp.hit_time;

  ResultTable& tr = out.trace;
  tr.columns = {"t", "re", "im", "flag", "log_radius"};
  tr.provenance = {
      {"re", "gamma(t) = g_t^-1(exp(i W_t)) by backward composition of frozen-driver slit maps"},
      {"im", "gamma(t) = g_t^-1(exp(i W_t)) by backward composition of frozen-driver slit maps"},
      {"log_radius", "log |(g_t^-1)'(0)| = -t"}};
  tr.nan_flags = {{"re", "flag"}, {"im", "flag"}};
  for (std::size_t i = 0; i < tp.points.size(); ++i) {
    tr.add_row({tp.times[i], tp.points[i].real(), tp.points[i].imag(), as_flag(tp.flagged[i]),
                tp.log_radius[i]});
  }

  ResultTable& dr = out.drive;
  dr.columns = {"t", "W", "V", "theta"};
  dr.provenance = {{"V", "marked point exp(i V_t), exact image under each frozen-driver step"},
                   {"W", "W = V + 2 theta"}};
  for (std::size_t k = 0; k < dp.size(); ++k) {
    dr.add_row({dp.times[k], dp.W[k], dp.V[k], dp.theta[k]});
  }
  return out;
}

void write_trace_files(const TraceResult& r, const RunManifest& m, const std::string& out_path) {
  write_text_file(out_path, to_csv(r.trace));
  save_manifest(m, manifest_path_for(out_path));
}

}  // namespace hsle
