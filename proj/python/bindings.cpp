#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hullmeter/hullmeter.hpp"

namespace py = pybind11;
using namespace hullmeter;

namespace {

SolverConfig make_config(std::uint64_t seed, int restarts, int directions, int refine_steps, double tol,
                         std::optional<double> normalize) {
  SolverConfig c;
  c.seed = seed;
  c.F_restarts = restarts;
  c.direction_samples = directions;
  c.refine_steps = refine_steps;
  c.tol_ratio = tol;
  c.normalization = normalize;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_hullmeter, m) {
  m.attr("__version__") = HULLMETER_VERSION;
  m.attr("SCHEMA") = kSchemaVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def(
      "measure_json",
      [](const Eigen::MatrixXcd& matrix, const Dims& dims, std::uint64_t seed, int restarts, int directions,
         int refine_steps, double tol, std::optional<double> normalize) {
        const DensityMatrix rho(dims, matrix);
        const SolverConfig cfg = make_config(seed, restarts, directions, refine_steps, tol, normalize);
        MeasureResult r;
        {
          py::gil_scoped_release release;
          r = measure(rho, cfg);
        }
        return make_report(rho, r, cfg).dump();
      },
      py::arg("matrix"), py::arg("dims"), py::arg("seed") = 1, py::arg("restarts") = 32, py::arg("directions") = 4096,
      py::arg("refine_steps") = 200, py::arg("tol") = 1e-6, py::arg("normalize") = py::none());

  m.def(
      "ppt_json",
      [](const Eigen::MatrixXcd& matrix, const Dims& dims) {
        return ppt_report_json(ppt_boundary_V(DensityMatrix(dims, matrix))).dump();
      },
      py::arg("matrix"), py::arg("dims"));

  m.def(
      "ghz_state", [](double theta) { return ghz_theta(theta).matrix(); }, py::arg("theta"));
  m.def("ghz_alpha", &ghz_alpha, py::arg("theta"));
  m.def(
      "werner_mix",
      [](const Eigen::MatrixXcd& matrix, const Dims& dims, double V) {
        return werner_mix(DensityMatrix(dims, matrix), V).matrix();
      },
      py::arg("matrix"), py::arg("dims"), py::arg("V"));
  m.def(
      "random_density", [](const Dims& dims, std::uint64_t seed) { return random_density(dims, seed).matrix(); },
      py::arg("dims"), py::arg("seed"));

  m.def(
      "basis",
      [](const Dims& dims) {
        const auto b = build_basis(dims);
        std::vector<Eigen::MatrixXcd> ops;
        for (int i = 0; i < b->size(); ++i) ops.push_back(b->op(i));
        return ops;
      },
      py::arg("dims"));
  m.def(
      "vectorize",
      [](const Eigen::MatrixXcd& matrix, const Dims& dims) {
        return Eigen::VectorXd(vectorize(DensityMatrix(dims, matrix), build_basis(dims)).components);
      },
      py::arg("matrix"), py::arg("dims"));
  m.def(
      "devectorize",
      [](const Eigen::VectorXd& components, const Dims& dims) { return devectorize(components, *build_basis(dims)); },
      py::arg("components"), py::arg("dims"));

  m.def(
      "max_product_overlap",
      [](const Eigen::MatrixXcd& op, const Dims& dims, int restarts, std::uint64_t seed) {
        return maximize_overlap(op, dims, OverlapConfig{.restarts = restarts, .seed = seed, .grid_starts = true, .seesaw = {}})
            .F_value;
      },
      py::arg("operator"), py::arg("dims"), py::arg("restarts") = 32, py::arg("seed") = 1);
}
