#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rydmf/app.hpp"
#include "rydmf/cloud.hpp"
#include "rydmf/config.hpp"
#include "rydmf/meanfield.hpp"
#include "rydmf/obe.hpp"
#include "rydmf/oracle.hpp"
#include "rydmf/presets.hpp"
#include "rydmf/validation.hpp"

namespace py = pybind11;
using namespace rydmf;

PYBIND11_MODULE(_rydmf, m) {
  m.doc() = "Mean-field spectra of interacting four-level Rydberg ensembles";
  m.attr("__version__") = version_string();

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_ArithmeticError);

  m.def("mhz_to_angular", &mhz_to_angular, py::arg("mhz"));
  m.def("angular_to_mhz", &angular_to_mhz, py::arg("omega"));

  py::class_<SchemeParams>(m, "SchemeParams", "Ladder parameters in rad/s")
      .def(py::init<>())
      .def_readwrite("omega1", &SchemeParams::omega1)
      .def_readwrite("omega2", &SchemeParams::omega2)
      .def_readwrite("omega3", &SchemeParams::omega3)
      .def_readwrite("delta1", &SchemeParams::delta1)
      .def_readwrite("delta2", &SchemeParams::delta2)
      .def_readwrite("delta3", &SchemeParams::delta3)
      .def_readwrite("gamma1", &SchemeParams::gamma1)
      .def_readwrite("gamma2", &SchemeParams::gamma2)
      .def_readwrite("gamma3", &SchemeParams::gamma3)
      .def("three_photon_detuning", &SchemeParams::three_photon_detuning);

  m.def("cesium_eit", &presets::cesium_eit);
  m.def("rubidium_eia", &presets::rubidium_eia);

  m.def(
      "steady_state",
      [](const SchemeParams& p, double shift) { return steady_state(p, shift).matrix(); },
      py::arg("params"), py::arg("shift") = 0.0, "4x4 steady-state density matrix");
  m.def(
      "time_evolve",
      [](const SchemeParams& p, double shift, const DensityMatrix::Matrix& rho0, double t) {
        return time_evolve(p, shift, DensityMatrix(rho0), t, t / 10.0).matrix();
      },
      py::arg("params"), py::arg("shift"), py::arg("rho0"), py::arg("t"));
  m.def("dressed_eigenvalues", &dressed_eigenvalues, py::arg("params"));
  m.def("weak_probe_rho12", &oracle::weak_probe_rho12, py::arg("params"));

  m.def(
      "mean_field",
      [](const SchemeParams& p, std::vector<Vec3> positions, double c6, double tolerance,
         double damping, int max_iterations) {
        SolverConfig cfg;
        cfg.tolerance = tolerance;
        cfg.damping = damping;
        cfg.max_iterations = max_iterations;
        const MeanFieldResult r =
            self_consistent_solve(p, Cloud::from_positions(std::move(positions), c6), cfg);
        std::vector<double> rho44;
        for (const auto& a : r.atoms) rho44.push_back(a.population(4));
        py::dict out;
        out["rho44"] = rho44;
        out["shifts"] = r.state.shifts;
        out["converged"] = r.state.converged;
        out["iterations"] = r.state.iteration;
        out["residual"] = r.state.residual;
        return out;
      },
      py::arg("params"), py::arg("positions"), py::arg("c6"), py::arg("tolerance") = 1e-6,
      py::arg("damping") = 0.5, py::arg("max_iterations") = 500,
      "Self-consistent solve for atoms at fixed positions (um, c6 in rad/s um^6)");

  py::class_<RunConfig>(m, "RunConfig")
      .def_property_readonly("text", [](const RunConfig& c) { return to_config_text(c); })
      .def_property_readonly("hash", [](const RunConfig& c) { return config_hash(c); })
      .def_property(
          "master_seed", [](const RunConfig& c) { return c.sweep.master_seed; },
          [](RunConfig& c, std::uint64_t s) { c.sweep.master_seed = s; })
      .def_property(
          "realizations", [](const RunConfig& c) { return c.sweep.realizations; },
          [](RunConfig& c, std::size_t n) { c.sweep.realizations = n; });
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<config>");
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run_sweep",
      [](const RunConfig& c, int threads) {
        SweepRun r;
        {
          py::gil_scoped_release release;
          r = run_sweep(c, threads);
        }
        py::dict out;
        out["csv"] = r.csv;
        out["summary_json"] = r.summary_json;
        out["unconverged_fraction"] = r.table.unconverged_fraction();
        if (r.feature) {
          out["feature"] = py::dict(py::arg("kind") = std::string(to_string(r.feature->kind)),
                                    py::arg("location") = r.feature->location);
        }
        return out;
      },
      py::arg("config"), py::arg("threads") = 0);
  m.def(
      "run_eigen",
      [](const RunConfig& c) {
        const EigenRun r = run_eigen(c);
        py::dict out;
        out["csv"] = r.csv;
        out["report_json"] = r.report_json;
        return out;
      },
      py::arg("config"));
  m.def(
      "validate",
      [](int random_sets) {
        ValidationOptions opts;
        opts.random_parameter_sets = random_sets;
        const ValidationReport rep = run_validation(opts);
        return py::make_tuple(rep.all_passed(), rep.to_json());
      },
      py::arg("random_sets") = 5, "Returns (all_passed, json_report)");
}
