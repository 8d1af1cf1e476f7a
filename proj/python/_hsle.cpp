#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hsle/diffusion.hpp"
#include "hsle/errors.hpp"
#include "hsle/exponents.hpp"
#include "hsle/harness.hpp"
#include "hsle/loewner.hpp"
#include "hsle/params.hpp"

namespace py = pybind11;

namespace {

hsle::Scheme make_scheme(double dt0, double eps_start, double eps_hit, double t_max, bool record) {
  hsle::Scheme s;
  s.dt.dt0 = dt0;
  s.eps_start = eps_start;
  s.eps_hit = eps_hit;
  s.t_max = t_max;
  s.record = record;
  return s;
}

// Column name -> list of cells.
py::dict table_dict(const hsle::ResultTable& t) {
  py::dict d;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows) {
      if (const double* x = std::get_if<double>(&row[c])) {
        col.append(*x);
      } else {
        col.append(std::get<std::string>(row[c]));
      }
    }
    d[py::str(t.columns[c])] = col;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_hsle, m) {
  m.doc() = "hypergeometric SLE exponents, hitting times and traces";
  m.attr("__version__") = hsle::version_string();

  static py::exception<hsle::Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<hsle::DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<hsle::NumericalError> numerical_error(m, "NumericalError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hsle::DomainError& e) {
      PyErr_SetString(domain_error.ptr(), e.what());
    } catch (const hsle::NumericalError& e) {
      PyErr_SetString(numerical_error.ptr(), e.what());
    } catch (const hsle::Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<hsle::Params>(m, "Params")
      .def_readonly("kappa", &hsle::Params::kappa)
      .def_readonly("mu", &hsle::Params::mu)
      .def_readonly("nu", &hsle::Params::nu)
      .def_readonly("q1", &hsle::Params::q1)
      .def_readonly("q2", &hsle::Params::q2)
      .def_readonly("a", &hsle::Params::a)
      .def_readonly("b", &hsle::Params::b)
      .def_readonly("c", &hsle::Params::c)
      .def_readonly("d", &hsle::Params::d)
      .def_readonly("e", &hsle::Params::e)
      .def("__repr__", [](const hsle::Params& p) {
        return "Params(kappa=" + std::to_string(p.kappa) + ", mu=" + std::to_string(p.mu) +
               ", nu=" + std::to_string(p.nu) + ")";
      });

  m.def("make_params", &hsle::make_params, py::arg("kappa"), py::arg("mu"), py::arg("nu"));
  m.def("params_from_exponents",
        [](double kappa, double alpha, double beta) {
          return hsle::params_from_exponents(kappa, {alpha, beta});
        },
        py::arg("kappa"), py::arg("alpha"), py::arg("beta"));
  m.def("exponents_from_mu_nu",
        [](const hsle::Params& p) {
          const auto ep = hsle::exponents_from_mu_nu(p);
          return py::make_tuple(ep.alpha, ep.beta);
        },
        "(alpha, beta) of a parameter set");
  m.def("mu_upper_bound", &hsle::mu_upper_bound, py::arg("kappa"), py::arg("nu"));
  m.def("central_charge", &hsle::central_charge, py::arg("kappa"));

  m.def("eta", &hsle::eta, py::arg("kappa"), py::arg("beta"));
  m.def("eta_n", &hsle::eta_n, py::arg("kappa"), py::arg("alpha"), py::arg("beta"), py::arg("n"));
  m.def("eta_of_c", &hsle::eta_of_c, py::arg("c"), py::arg("beta"));
  m.def("lambda_n", &hsle::lambda_n, py::arg("params"), py::arg("n"));
  m.def("lambda_sequence", &hsle::lambda_sequence, py::arg("params"), py::arg("n"));

  m.def("survival_series",
        [](const hsle::Params& p, const std::vector<double>& ts, std::size_t trunc_n) {
          const auto se = hsle::build_spectral_expansion(p, trunc_n);
          std::vector<double> out;
          for (double t : ts) out.push_back(hsle::survival_series(se, t).value);
          return out;
        },
        py::arg("params"), py::arg("t"), py::arg("trunc_n") = hsle::kDefaultTruncation,
        "sum_n a_n exp(-lambda_n t) at each t");
  m.def("disconnection_probability",
        [](double kappa, double alpha, double beta, double R) {
          return hsle::disconnection_series(kappa, alpha, beta, R).value;
        },
        py::arg("kappa"), py::arg("alpha"), py::arg("beta"), py::arg("R"));

  m.def("simulate_theta",
        [](const hsle::Params& p, std::uint64_t seed, std::size_t index, double dt0,
           double eps_start, double eps_hit, double t_max) {
          py::gil_scoped_release release;
          const auto path = hsle::simulate_theta(
              p, seed, make_scheme(dt0, eps_start, eps_hit, t_max, true), index);
          py::gil_scoped_acquire acquire;
          return py::make_tuple(path.times, path.thetas, path.hit_time);
        },
        py::arg("params"), py::arg("seed"), py::arg("index") = 0, py::arg("dt0") = 1e-3,
        py::arg("eps_start") = 1e-3, py::arg("eps_hit") = 1e-4, py::arg("t_max") = 50.0,
        "(times, thetas, hit_time) of one path");
  m.def("sample_hitting_times",
        [](const hsle::Params& p, std::size_t n_paths, std::uint64_t seed, double dt0,
           double eps_start, double eps_hit, double t_max, unsigned threads) {
          py::gil_scoped_release release;
          return hsle::sample_hitting_times(
                     p, n_paths, seed, make_scheme(dt0, eps_start, eps_hit, t_max, false), threads)
              .values;
        },
        py::arg("params"), py::arg("n_paths"), py::arg("seed"), py::arg("dt0") = 1e-3,
        py::arg("eps_start") = 1e-3, py::arg("eps_hit") = 1e-4, py::arg("t_max") = 50.0,
        py::arg("threads") = 0, "hitting times, inf for censored paths");

  m.def("trace",
        [](const hsle::Params& p, std::uint64_t seed, std::size_t n_points, double dt0,
           double theta0, double eps_hit, double t_max) {
          hsle::TraceRun run;
          run.seed = seed;
          run.n_points = n_points;
          run.scheme = make_scheme(dt0, theta0, eps_hit, t_max, true);
          const auto r = hsle::cmd_trace(p, run);
          py::dict d = table_dict(r.trace);
          d["classification"] = hsle::to_string(r.classification);
          d["hit_time"] = r.hit_time;
          return d;
        },
        py::arg("params"), py::arg("seed"), py::arg("n_points") = 200, py::arg("dt0") = 1e-3,
        py::arg("theta0") = 1e-3, py::arg("eps_hit") = 1e-4, py::arg("t_max") = 50.0);
  m.def("classify_geometry",
        [](const hsle::Params& p) { return hsle::to_string(hsle::classify_geometry(p)); });
  m.def("classify_construction", [](double kappa, double alpha, double beta) {
    return hsle::to_string(hsle::classify_construction(kappa, {alpha, beta}));
  });

  m.def("exponent_table",
        [](double kappa, double alpha, double beta, std::size_t n_max) {
          return table_dict(hsle::cmd_exponent(kappa, alpha, beta, n_max));
        },
        py::arg("kappa"), py::arg("alpha"), py::arg("beta"), py::arg("n_max"));
  m.def("verify_table",
        [](const std::vector<double>& kappas) { return table_dict(hsle::cmd_verify(kappas)); },
        py::arg("kappas") = hsle::default_verify_kappas());
}
