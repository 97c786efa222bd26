#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blowup/direct_solver.hpp"
#include "blowup/experiment.hpp"
#include "blowup/hermite.hpp"
#include "blowup/io.hpp"
#include "blowup/mehler.hpp"
#include "blowup/shooting.hpp"
#include "blowup/verification.hpp"

namespace py = pybind11;
using namespace blowup;

namespace {

RunConfig config_from(const std::string& text) {
  RunConfig cfg = parse_config(text.empty() ? "{}" : text, "<python>");
  validate(cfg);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flat-profile blowup laboratory: spectral tools, shooting and direct solvers.";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("p", &ModelParams::p)
      .def_readonly("k", &ModelParams::k)
      .def_readonly("kappa", &ModelParams::kappa)
      .def_readonly("M", &ModelParams::M)
      .def_readonly("M_floor", &ModelParams::M_floor);
  m.def("make_params", &make_params, py::arg("p") = 3.0, py::arg("k") = 2);

  m.def("scale_factor", &scale_factor, py::arg("s"), py::arg("k"));
  m.def(
      "profile",
      [](double y, double b, const ModelParams& mp) {
        const auto v = eval_profile(y, b, mp);
        return py::make_tuple(v.f, v.e);
      },
      py::arg("y"), py::arg("b"), py::arg("params"), "(f_b(y), e_b(y))");
  m.def("hermite", &eval_scaled_hermite, py::arg("m"), py::arg("y"), py::arg("s"), py::arg("k"));
  m.def("hermite_norm2", &hermite_norm2, py::arg("n"), py::arg("beta"));
  m.def("kernel", &kernel_eval, py::arg("y"), py::arg("z"), py::arg("s"), py::arg("sigma"),
        py::arg("k"));
  m.def("mode_multiplier", &mode_multiplier, py::arg("n"), py::arg("sigma"), py::arg("s"),
        py::arg("k"));

  m.def(
      "spectral_suite",
      [](std::vector<int> ks, std::vector<double> ss, int nmax) {
        const auto r = spectral_suite(ks, ss, nmax);
        return py::dict(py::arg("orthogonality") = r.orthogonality, py::arg("jordan") = r.jordan,
                        py::arg("product") = r.product, py::arg("checks") = r.checks);
      },
      py::arg("ks") = std::vector<int>{2, 3}, py::arg("ss") = std::vector<double>{2, 10, 30},
      py::arg("nmax") = 12);
  m.def(
      "mehler_suite",
      [](int k, double sigma, std::vector<double> gaps, int nmax) {
        const auto r = mehler_suite(k, sigma, gaps, nmax);
        return py::dict(py::arg("multiplier") = r.multiplier, py::arg("semigroup") = r.semigroup,
                        py::arg("mass") = r.mass);
      },
      py::arg("k") = 2, py::arg("sigma") = 2.0,
      py::arg("gaps") = std::vector<double>{0.1, 0.5, 1.0, 2.0, 3.0}, py::arg("nmax") = 8);

  m.def("config_keys", &config_keys);
  m.def(
      "normalize_config", [](const std::string& text) { return config_to_json(config_from(text)); },
      py::arg("config_json") = "{}", "Parse, validate and return the full config as JSON.");

  m.def(
      "simulate_csv",
      [](const std::string& text) {
        const RunConfig cfg = config_from(text);
        const ModelParams mp = model_params(cfg);
        const DynamicsConfig dyn = dynamics_config(cfg);
        std::vector<double> d = cfg.d;
        if (d.empty()) d.assign(2 * mp.k, 0.0);
        py::gil_scoped_release release;
        const auto rec = run(init_state(d, dyn, mp), cfg.s0 + cfg.horizon, mp, dyn);
        return trajectory_csv(rec, mp.M_floor);
      },
      py::arg("config_json") = "{}", "Trajectory of the modal system as CSV text.");
  m.def(
      "shoot_json",
      [](const std::string& text) {
        const RunConfig cfg = config_from(text);
        py::gil_scoped_release release;
        return certificate_to_json(search(shoot_config(cfg), model_params(cfg)));
      },
      py::arg("config_json") = "{}", "Run the shooting search; returns the certificate JSON.");
  m.def(
      "blowup_time",
      [](double T, double p, int k) {
        const auto r = blowup_time_check(make_params(p, k), T);
        return py::dict(py::arg("T_hat") = static_cast<double>(r.T_hat),
                        py::arg("relative_error") = r.relative_error,
                        py::arg("deterministic") = r.deterministic);
      },
      py::arg("T") = 0.1, py::arg("p") = 3.0, py::arg("k") = 2);
  m.def(
      "run_experiment",
      [](const std::string& subcommand, const std::string& text) {
        std::ostringstream log;
        int code;
        {
          py::gil_scoped_release release;
          try {
            code = run_experiment(subcommand, config_from(text), log);
          } catch (const ConfigError& e) {
            log << "config error: " << e.what() << "\n";
            code = kExitConfig;
          }
        }
        return py::make_tuple(code, log.str());
      },
      py::arg("subcommand"), py::arg("config_json") = "{}",
      "Same as the CLI; returns (exit_code, log).");
}
