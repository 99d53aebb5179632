#include <anharmonic/acceptance.hpp>
#include <anharmonic/approximant.hpp>
#include <anharmonic/bloch_engine.hpp>
#include <anharmonic/mesh_oracle.hpp>
#include <anharmonic/radial_extension.hpp>
#include <anharmonic/series_engine.hpp>
#include <anharmonic/variational_solver.hpp>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace anharmonic;

namespace {

py::object to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
  }
}

SolverOptions solver_options(unsigned long long seed, const std::string& precision, int points) {
  SolverOptions opt;
  opt.simplex.seed = seed;
  opt.precision = parse_precision(precision);
  opt.quad.points = points;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> numerical(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      numerical(e.what());
    }
  });

  m.def(
      "rb_coefficients", [](int order) { return to_py(nlohmann::json(rb_coefficients(order))); }, py::arg("order") = 20,
      "Exact eps_0..eps_N and Y_n coefficients as rational strings.");
  m.def(
      "gb_terms",
      [](int order) {
        nlohmann::json j = gb_terms(order);
        return to_py(j);
      },
      py::arg("order"), "Semiclassical terms Z_0..Z_N in the ring Q[u, w]/(w^2 - 1 - u^2).");

  m.def("a_fit", &a_fit, py::arg("N"));
  m.def("b_fit", &b_fit, py::arg("N"));
  m.def("ground_state_ab", &ground_state_ab, py::arg("g2"), "Interpolated (A, B) of the ground state.");
  m.def(
      "log_psi",
      [](const py::dict& params, double x) {
        ApproximantParams prm;
        prm.n = params["n"].cast<int>();
        prm.p = params["p"].cast<int>();
        prm.g2 = params["g2"].cast<double>();
        prm.A = params["A"].cast<double>();
        prm.B = params["B"].cast<double>();
        if (params.contains("alpha")) prm.alpha = params["alpha"].cast<double>();
        if (params.contains("nodes")) prm.nodes = params["nodes"].cast<std::vector<double>>();
        return log_psi(prm, x).v;
      },
      py::arg("params"), py::arg("x"), "log|Psi(x)| for a parameter dict as returned in result['params'].");

  m.def(
      "optimize",
      [](int n, int p, double g2, unsigned long long seed, const std::string& precision, int points) {
        const auto chain = solve_chain(g2, p, n, solver_options(seed, precision, points));
        return to_py(nlohmann::json(chain.back()));
      },
      py::arg("n"), py::arg("p"), py::arg("g2"), py::arg("seed") = defaults::kSeed,
      py::arg("precision") = "double", py::arg("points") = defaults::kQuadraturePoints,
      "Optimized approximant for (n, p); the lower states of the same parity are solved first.");
  m.def(
      "solve_chain",
      [](double g2, int p, int n_max, unsigned long long seed, const std::string& precision) {
        return to_py(nlohmann::json(solve_chain(g2, p, n_max, solver_options(seed, precision, defaults::kQuadraturePoints))));
      },
      py::arg("g2"), py::arg("p"), py::arg("n_max"), py::arg("seed") = defaults::kSeed, py::arg("precision") = "double");

  m.def(
      "mesh_energy",
      [](double g2, int n, int p, int points) {
        if (p != 0 && p != 1) throw ValidationError("p must be 0 or 1");
        if (n < 0) throw ValidationError("n must be >= 0");
        MeshConfig cfg;
        cfg.g2 = g2;
        cfg.points = points;
        return to_py(nlohmann::json(mesh_energy(cfg, 2 * n + p)));
      },
      py::arg("g2"), py::arg("n") = 0, py::arg("p") = 0, py::arg("points") = defaults::kMeshPoints);
  m.def(
      "radial_mesh_energy",
      [](int D, int ell, double g2, int points) { return to_py(nlohmann::json(radial_mesh_energy(D, ell, g2, points))); },
      py::arg("D"), py::arg("ell"), py::arg("g2"), py::arg("points") = defaults::kMeshPoints);
  m.def(
      "optimize_radial",
      [](int D, int ell, double g2, unsigned long long seed) {
        SimplexOptions simplex;
        simplex.seed = seed;
        return to_py(nlohmann::json(optimize_radial(D, 0, ell, g2, {}, simplex)));
      },
      py::arg("D"), py::arg("ell"), py::arg("g2"), py::arg("seed") = defaults::kSeed);

  m.def(
      "run_acceptance",
      [](const std::vector<int>& criteria) {
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = anharmonic::run_acceptance({}, criteria);
        }
        return to_py(nlohmann::json(results));
      },
      py::arg("criteria") = std::vector<int>{}, "Acceptance criteria as a list of {id, title, pass, details}.");
}
