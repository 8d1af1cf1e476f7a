// hsle: exponent tables, survival checks, verification and traces.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hsle/errors.hpp"
#include "hsle/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 2, kInputError = 3, kNumericalError = 4 };

struct Outputs {
  std::string out;
  std::string samples_out;
  std::string drive_out;
  std::string check;
  unsigned threads = 0;
};

struct Produced {
  hsle::RunManifest manifest;
  std::string csv;
  std::string samples_csv;
  std::string drive_csv;
  int code = kOk;
};

Produced produce(const hsle::RunManifest& in, const Outputs& o) {
  Produced r;
  r.manifest = in;
  hsle::RunManifest& m = r.manifest;
  if (m.command == "exponent") {
    double alpha = m.alpha, beta = m.beta;
    if (m.mode == hsle::InputMode::mu_nu) {
      const auto ep = hsle::exponents_from_mu_nu(hsle::make_params(m.kappa, m.mu, m.nu));
      alpha = ep.alpha;
      beta = ep.beta;
    }
    r.csv = hsle::to_csv(hsle::cmd_exponent(m.kappa, alpha, beta, m.n_max));
  } else if (m.command == "survival") {
    hsle::SurvivalRun run;
    run.grid = m.grid;
    run.r_mode = m.r_mode;
    run.n_paths = m.n_paths;
    run.seed = m.seed;
    run.scheme = m.scheme();
    run.scheme.record = false;
    run.trunc_n = m.trunc_n;
    run.threads = o.threads;
    const auto res = hsle::cmd_survival(hsle::manifest_params(m), run);
    r.csv = hsle::to_csv(res.table);
    if (!o.samples_out.empty()) r.samples_csv = hsle::to_csv(hsle::sample_table(res.sample));
  } else if (m.command == "verify") {
    const auto t = hsle::cmd_verify(m.kappa_list);
    r.csv = hsle::to_csv(t);
    r.code = hsle::verify_passed(t) ? kOk : kVerifyFailed;
  } else if (m.command == "trace") {
    hsle::TraceRun run;
    run.seed = m.seed;
    run.scheme = m.scheme();
    run.n_points = m.n_points;
    const auto res = hsle::cmd_trace(hsle::manifest_params(m), run);
    m.info["classification"] = hsle::to_string(res.classification);
    r.csv = hsle::to_csv(res.trace);
    if (!o.drive_out.empty()) r.drive_csv = hsle::to_csv(res.drive);
  } else {
    throw hsle::DomainError("unknown command '" + m.command + "'");
  }
  return r;
}

std::string default_out(const std::string& command) {
  const char* dir = std::getenv("HSLE_OUTPUT_DIR");
  if (dir && *dir) return std::string(dir) + "/" + command + ".csv";
  return command == "trace" ? "trace.csv" : "";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw hsle::DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int deliver(const Produced& r, const Outputs& o) {
  if (!o.check.empty()) {
    if (read_file(o.check) != r.csv) {
      std::cerr << "replay output differs from " << o.check << "\n";
      return kVerifyFailed;
    }
    std::cout << "identical to " << o.check << "\n";
    return r.code;
  }
  const std::string out = o.out.empty() ? default_out(r.manifest.command) : o.out;
  if (out.empty()) {
    std::cout << r.csv;
  } else {
    hsle::write_text_file(out, r.csv);
    hsle::save_manifest(r.manifest, hsle::manifest_path_for(out));
    std::cerr << "wrote " << out << "\n";
  }
  if (!o.samples_out.empty() && !r.samples_csv.empty()) {
    hsle::write_text_file(o.samples_out, r.samples_csv);
  }
  if (!o.drive_out.empty() && !r.drive_csv.empty()) hsle::write_text_file(o.drive_out, r.drive_csv);
  const auto it = r.manifest.info.find("classification");
  if (it != r.manifest.info.end()) std::cerr << "classification: " << it->second << "\n";
  return r.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergeometric SLE exponents, survival and traces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hsle::version_string());

  hsle::RunManifest m;
  Outputs o;
  m.n_paths = 10000;
  m.n_max = 10;
  m.n_points = 200;
  m.seed = 1;
  m.grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  m.kappa_list = hsle::default_verify_kappas();
  std::vector<double> r_grid;
  std::string manifest_path;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--kappa", m.kappa, "kappa in (0, 4]")->required();
    auto* mu = sub->add_option("--mu", m.mu, "mu (with --nu)");
    auto* nu = sub->add_option("--nu", m.nu, "nu >= 0 (with --mu)");
    auto* alpha = sub->add_option("--alpha", m.alpha, "alpha (with --beta)");
    auto* beta = sub->add_option("--beta", m.beta, "beta (with --alpha)");
    alpha->needs(beta);
    beta->needs(alpha);
    for (auto* x : {mu, nu}) {
      x->excludes(alpha);
      x->excludes(beta);
    }
    sub->callback([&m, alpha] {
      m.mode = alpha->count() ? hsle::InputMode::alpha_beta : hsle::InputMode::mu_nu;
    });
  };
  auto add_scheme = [&](CLI::App* sub) {
    sub->add_option("--seed", m.seed, "RNG seed")->capture_default_str();
    sub->add_option("--dt0", m.dt0, "largest time step")->capture_default_str();
    sub->add_option("--eps-start", m.eps_start, "starting theta")->capture_default_str();
    sub->add_option("--eps-hit", m.eps_hit, "hit when theta >= pi - eps_hit")
        ->capture_default_str();
    sub->add_option("--t-max", m.t_max, "censoring time")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output CSV (a manifest is written next to it)");
  };

  auto* exponent = app.add_subcommand("exponent", "eta^n, lambda_n and a_n table");
  add_params(exponent);
  exponent->add_option("--n-max", m.n_max, "last n")->capture_default_str();
  add_out(exponent);

  auto* survival = app.add_subcommand("survival", "eigen-expansion vs Monte Carlo survival");
  add_params(survival);
  add_scheme(survival);
  survival->add_option("--n-paths", m.n_paths, "simulated paths")->capture_default_str();
  survival->add_option("--trunc-n", m.trunc_n, "terms in the eigen-expansion")
      ->capture_default_str();
  auto* t_opt = survival->add_option("--t", m.grid, "t grid")->delimiter(',');
  survival->add_option("--R", r_grid, "R grid (disconnection mode, t = ln R)")
      ->delimiter(',')
      ->excludes(t_opt);
  survival->add_option("--threads", o.threads, "worker threads (0: all cores)");
  survival->add_option("--samples-out", o.samples_out, "CSV of the hitting times");
  add_out(survival);

  auto* verify = app.add_subcommand("verify", "analytic self-checks over a kappa grid");
  verify->add_option("--kappas", m.kappa_list, "kappa values")->delimiter(',');
  add_out(verify);

  auto* trace = app.add_subcommand("trace", "one hSLE trace as CSV");
  add_params(trace);
  add_scheme(trace);
  trace->add_option("--n-points", m.n_points, "points along the trace")->capture_default_str();
  trace->add_option("--drive-out", o.drive_out, "CSV of the driving pair (t, W, V, theta)");
  add_out(trace);

  auto* replay = app.add_subcommand("replay", "rerun a manifest");
  replay->add_option("manifest", manifest_path, "manifest JSON")->required();
  replay->add_option("--check", o.check, "compare the output with this file instead of writing");
  replay->add_option("--threads", o.threads, "worker threads (0: all cores)");
  replay->add_option("--samples-out", o.samples_out, "CSV of the hitting times");
  replay->add_option("--drive-out", o.drive_out, "CSV of the driving pair");
  add_out(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (replay->parsed()) {
      return deliver(produce(hsle::load_manifest(manifest_path), o), o);
    }
    for (auto* sub : {exponent, survival, verify, trace}) {
      if (sub->parsed()) m.command = sub->get_name();
    }
    if (!r_grid.empty()) {
      m.r_mode = true;
      m.grid = r_grid;
    }
    if (m.command != "survival") m.grid.clear();
    if (m.command != "verify") m.kappa_list.clear();
    if (m.command != "survival") m.n_paths = 0;
    return deliver(produce(m, o), o);
  } catch (const hsle::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const hsle::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}
