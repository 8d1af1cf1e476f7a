#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "hsle/errors.hpp"
#include "hsle/harness.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hsle_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("CSV output follows RFC 4180") {
  hsle::ResultTable t;
  t.columns = {"x", "label"};
  t.add_row({0.1, std::string("plain")});
  t.add_row({1.0 / 3.0, std::string("a,b")});
  t.add_row({-2.5e-300, std::string("say \"hi\"")});
  t.provenance["x"] = "test column";
  const std::string csv = hsle::to_csv(t);
  CHECK(csv ==
        "# x: test column\r\n"
        "x,label\r\n"
        "0.10000000000000001,plain\r\n"
        "0.33333333333333331,\"a,b\"\r\n"
        "-2.5e-300,\"say \"\"hi\"\"\"\r\n");
  CHECK(hsle::to_csv(t, false).rfind("x,label\r\n", 0) == 0);
  // %.17g round-trips
  CHECK(std::stod("0.33333333333333331") == 1.0 / 3.0);

  CHECK_THROWS_AS(t.add_row({1.0}), hsle::DomainError);
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::string("x")});
  CHECK_THROWS_AS(t.validate(), hsle::DomainError);
  t.columns.push_back("flag");
  for (auto& r : t.rows) r.emplace_back(0.0);
  t.nan_flags["x"] = "flag";
  CHECK_NOTHROW(t.validate());
  CHECK(hsle::to_csv(t).find("nan,x,0\r\n") != std::string::npos);
  CHECK(t.number(1, "x") == 1.0 / 3.0);
  CHECK(t.text(1, "label") == "a,b");
  CHECK_THROWS_AS(t.number(0, "label"), hsle::DomainError);
  CHECK_THROWS_AS(t.column_index("missing"), hsle::DomainError);
}

TEST_CASE("manifest round-trip") {
  hsle::RunManifest m;
  m.command = "survival";
  m.mode = hsle::InputMode::alpha_beta;
  m.kappa = 8.0 / 3.0;
  m.alpha = 0.1;
  m.beta = 1.0 / 3.0;
  m.seed = 0xFFFFFFFFFFFFFFFFull;
  m.dt0 = 2.5e-4;
  m.eps_hit = 1e-300;
  m.n_paths = 12345;
  m.grid = {0.25, std::sqrt(2.0), 1e-17};
  m.kappa_list = {1.0, 4.0};
  m.r_mode = true;
  m.info["note"] = "x";
  CHECK(hsle::manifest_from_json(hsle::manifest_to_json(m)) == m);

  const auto d = scratch_dir("manifest");
  const auto path = (d / "m.json").string();
  hsle::save_manifest(m, path);
  CHECK(hsle::load_manifest(path) == m);
  CHECK(hsle::manifest_to_json(hsle::load_manifest(path)) == slurp(path));

  const hsle::Scheme s = m.scheme();
  CHECK(s.dt.dt0 == 2.5e-4);
  CHECK(s.eps_hit == 1e-300);
  hsle::RunManifest m2;
  m2.set_scheme(s);
  CHECK(m2.scheme().eps_hit == s.eps_hit);

  CHECK_THROWS_AS(hsle::manifest_from_json("{}"), hsle::DomainError);
  CHECK_THROWS_AS(hsle::manifest_from_json("not json"), hsle::DomainError);
  CHECK_THROWS_AS(hsle::load_manifest((d / "absent.json").string()), hsle::DomainError);
  CHECK(hsle::manifest_path_for("out/run.csv") == "out/run.manifest.json");
  CHECK(hsle::manifest_path_for("a.b/run") == "a.b/run.manifest.json");
}

TEST_CASE("exponent table") {
  const auto t = hsle::cmd_exponent(4.0, 0.0, 4.0, 1);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "n") == 0.0);
  CHECK(std::abs(t.number(0, "eta_n") - 2.0) < 1e-12);
  CHECK(std::abs(t.number(0, "lambda_n") - 2.0) < 1e-12);

  const auto b = hsle::cmd_exponent(8.0 / 3.0, 0.0, 2.0, 40);
  REQUIRE(b.rows.size() == 41);
  CHECK(std::abs(b.number(0, "eta_n") - 2.0 / 3.0) < 1e-12);
  double sum = 0.0;
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    sum += b.number(r, "a_n");
    CHECK(std::abs(b.number(r, "eta_n") - b.number(r, "lambda_n")) <= 1e-12 * (1.0 + r * r));
    if (r > 0) CHECK(b.number(r, "lambda_n") > b.number(r - 1, "lambda_n"));
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(b.provenance.contains("a_n"));
  CHECK(b.provenance.contains("lambda_n"));

  // κ = 4, μ → 0⁻, ν = 0: untruncated coefficients are 4(−1)^n/(π(2n+1))
  const auto ep = hsle::exponents_from_mu_nu(hsle::make_params(4.0, -1e-9, 0.0));
  const auto k4 = hsle::cmd_exponent(4.0, ep.alpha, ep.beta, 5);
  for (std::size_t n = 0; n < 6; ++n) {
    const double want = 4.0 * (n % 2 ? -1.0 : 1.0) / (M_PI * (2.0 * n + 1.0));
    CHECK(std::abs(k4.number(n, "a_n_limit") - want) < 1e-6);
  }

  // α on η_κ(β): T = ∞
  const double e = hsle::eta(3.0, 2.0);
  const auto deg = hsle::cmd_exponent(3.0, e, 2.0, 3);
  CHECK(deg.number(0, "a_n") == 1.0);
  CHECK(deg.number(2, "a_n_limit") == 0.0);
  CHECK(std::abs(deg.number(0, "lambda_n")) < 1e-12);

  CHECK_THROWS_AS(hsle::cmd_exponent(3.0, 0.0, 0.1, 3), hsle::RangeError);
  CHECK_THROWS_AS(hsle::cmd_exponent(3.0, 5.0, 1.0, 3), hsle::RangeError);
}

TEST_CASE("survival table") {
  const auto p = hsle::make_params(4.0, 0.0, 1.0);
  hsle::SurvivalRun run;
  run.grid = {0.5, 1.0, 2.0, 4.0};
  run.n_paths = 4000;
  run.seed = 2024;
  run.scheme.record = false;
  run.threads = 1;
  const auto res = hsle::cmd_survival(p, run);
  const auto& t = res.table;
  REQUIRE(t.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.number(i, "t") == run.grid[i]);
    CHECK(std::abs(t.number(i, "z")) <= 3.0);
    CHECK(t.number(i, "z_flag") == 0.0);
    CHECK(t.number(i, "truncation_warning") == 0.0);
  }
  CHECK(res.sample.count == 4000);
  for (const char* c : {"series", "empirical", "ci_halfwidth", "z"}) {
    CHECK(t.provenance.contains(c));
  }

  // scheduling does not change the bytes
  run.threads = 3;
  CHECK(hsle::to_csv(hsle::cmd_survival(p, run).table) == hsle::to_csv(t));

  const auto samples = hsle::sample_table(res.sample);
  CHECK(samples.rows.size() == 4000);
  CHECK(samples.number(17, "T") == res.sample.values[17]);

  // disconnection mode: t = ln R and the series is p^R
  hsle::SurvivalRun rr;
  rr.grid = {1.0, 3.0, 20.0};
  rr.r_mode = true;
  const auto d = hsle::cmd_survival(p, rr).table;
  REQUIRE(d.columns.front() == "R");
  const auto ep = hsle::exponents_from_mu_nu(p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.number(i, "t") == std::log(rr.grid[i]));
    const double want = hsle::disconnection_series(4.0, ep.alpha, ep.beta, rr.grid[i]).value;
    CHECK(std::abs(d.number(i, "series") - want) < 1e-12);
    CHECK(std::isnan(d.number(i, "empirical")));
    CHECK(d.number(i, "z_flag") == 1.0);
  }
  CHECK(d.provenance.contains("t"));
  CHECK_NOTHROW(d.validate());

  rr.grid = {0.5};
  CHECK_THROWS_AS(hsle::cmd_survival(p, rr), hsle::DomainError);
  hsle::SurvivalRun neg;
  neg.grid = {-1.0};
  CHECK_THROWS_AS(hsle::cmd_survival(p, neg), hsle::DomainError);

  // b = 0: the series is identically 1
  const auto b0 = hsle::make_params(3.0, hsle::mu_upper_bound(3.0, 0.4), 0.4);
  hsle::SurvivalRun short_run;
  short_run.grid = {1.0, 5.0};
  short_run.n_paths = 20;
  short_run.scheme.t_max = 5.0;
  short_run.scheme.record = false;
  const auto s0 = hsle::cmd_survival(b0, short_run).table;
  CHECK(s0.number(1, "series") == 1.0);
  CHECK(s0.number(1, "empirical") == 1.0);
  CHECK(s0.number(1, "z_flag") == 1.0);
}

TEST_CASE("verify report") {
  const auto t = hsle::cmd_verify(hsle::default_verify_kappas());
  CHECK(hsle::verify_passed(t));
  std::size_t skips = 0, b_zero_rows = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK_FALSE(t.text(r, "source").empty());
    if (t.text(r, "param_set") == "b_zero") {
      ++b_zero_rows;
      if (t.text(r, "check") == "eigen_vs_closed_form") {
        CHECK(t.text(r, "status") == "skip");
        ++skips;
      }
    }
  }
  CHECK(skips == hsle::default_verify_kappas().size());
  CHECK(b_zero_rows > 0);
  CHECK_NOTHROW(t.validate());

  // a κ outside (0, 4] gives fail rows, not an exception
  const auto bad = hsle::cmd_verify({5.0});
  CHECK_FALSE(hsle::verify_passed(bad));
}

TEST_CASE("trace output") {
  const auto p = hsle::make_params(3.0, 0.0, 0.4);
  hsle::TraceRun run;
  run.seed = 5;
  run.n_points = 50;
  const auto r = hsle::cmd_trace(p, run);
  CHECK(r.trace.rows.size() == 50);
  CHECK(r.trace.number(0, "re") == 1.0);
  CHECK(r.trace.number(0, "im") == 0.0);
  CHECK(r.trace.number(0, "t") == 0.0);
  CHECK(r.classification == hsle::classify_geometry(p));
  CHECK(r.classification == hsle::GeometryCase::case_ii);
  CHECK(hsle::classify_geometry(hsle::make_params(3.0, 0.0, 0.1)) ==
        hsle::cmd_trace(hsle::make_params(3.0, 0.0, 0.1), run).classification);
  for (std::size_t i = 0; i < r.trace.rows.size(); ++i) {
    CHECK(r.trace.number(i, "log_radius") == -r.trace.number(i, "t"));
    if (r.trace.number(i, "flag") == 0.0) {
      CHECK(std::hypot(r.trace.number(i, "re"), r.trace.number(i, "im")) <= 1.0 + 1e-6);
    }
  }
  CHECK(r.drive.rows.size() > r.trace.rows.size());
  CHECK(r.drive.number(0, "W") == 0.0);

  // identical inputs give identical bytes
  CHECK(hsle::to_csv(hsle::cmd_trace(p, run).trace) == hsle::to_csv(r.trace));

  const auto d = scratch_dir("trace");
  hsle::RunManifest m;
  m.command = "trace";
  m.kappa = 3.0;
  m.nu = 0.4;
  m.seed = 5;
  m.n_points = 50;
  m.info["classification"] = hsle::to_string(r.classification);
  hsle::write_trace_files(r, m, (d / "tr.csv").string());
  CHECK(slurp(d / "tr.csv") == hsle::to_csv(r.trace));
  CHECK(hsle::load_manifest((d / "tr.manifest.json").string()) == m);

  try {
    hsle::write_trace_files(r, m, "/nonexistent_dir_for_hsle/tr.csv");
    FAIL("expected DomainError");
  } catch (const hsle::DomainError& e) {
    CHECK(std::string(e.what()).find("/nonexistent_dir_for_hsle/tr.csv") != std::string::npos);
  }
  run.n_points = 0;
  CHECK_THROWS_AS(hsle::cmd_trace(p, run), hsle::DomainError);
}
