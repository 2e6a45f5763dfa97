#include "mlfg/homotopy.hpp"
#include "mlfg/report.hpp"
#include "mlfg/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace mlfg;

namespace {

// Round-trips through the JSON text so Python receives plain dicts and lists.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

PrimalDualPoint make_point(const Game& game, const std::optional<Vector>& x,
                           const std::optional<Vector>& lambda) {
  PrimalDualPoint z{x.value_or(Vector::Zero(game.n())), lambda.value_or(Vector::Zero(game.m_bar()))};
  if (z.x.size() != game.n()) throw std::invalid_argument("x has wrong length");
  if (z.lambda.size() != game.m_bar()) throw std::invalid_argument("lambda has wrong length");
  return z;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quadratic multi-leader-follower game solver";

  py::register_exception<GameError>(m, "GameError", PyExc_ValueError);

  py::class_<Game>(m, "Game")
      .def_static("dataset", [](int index) { return Game(builtin_dataset(index)); }, py::arg("index"))
      .def_static("from_json", [](const std::string& text) { return Game(parse_game(text)); },
                  py::arg("text"))
      .def_static("load", [](const std::string& path) { return Game(load_game(path)); },
                  py::arg("path"))
      .def("to_json", [](const Game& g) { return game_to_json(g.spec()); })
      .def_property_readonly("n", &Game::n)
      .def_property_readonly("m", &Game::m)
      .def_property_readonly("m_bar", &Game::m_bar)
      .def_property_readonly("num_leaders", &Game::num_leaders)
      .def_property_readonly("Q", &Game::Q)
      .def_property_readonly("c", &Game::c)
      .def_property_readonly("G", &Game::G)
      .def_property_readonly("b", &Game::b)
      .def_property_readonly("a", &Game::a)
      .def_property_readonly("mu", &Game::mu)
      .def("constraints", &Game::constraints, py::arg("x"));

  m.def("phi_tilde", &phi_tilde, py::arg("t"), py::arg("eps"), py::arg("p") = 2);
  m.def("phi_tilde_d1", &phi_tilde_d1, py::arg("t"), py::arg("eps"), py::arg("p") = 2);

  m.def("best_response_exact", &best_response_exact, py::arg("game"), py::arg("x"));
  m.def("best_response_smoothed",
        [](const Game& g, const Vector& x, double eps, int p) {
          return best_response_smoothed(g, x, Smoothing{eps, p});
        },
        py::arg("game"), py::arg("x"), py::arg("eps"), py::arg("p") = 2);
  m.def("leader_objective", &leader_objective, py::arg("game"), py::arg("nu"), py::arg("x"));
  m.def("pseudo_gradient",
        [](const Game& g, const Vector& x, double eps, int p) {
          return pseudo_gradient_smoothed(g, x, Smoothing{eps, p});
        },
        py::arg("game"), py::arg("x"), py::arg("eps"), py::arg("p") = 2);
  m.def("potential", &potential_value, py::arg("game"), py::arg("x"));

  m.def("merit",
        [](const Game& g, const Vector& x, const Vector& lambda, double eps, int p) {
          return merit(g, make_point(g, x, lambda), Smoothing{eps, p});
        },
        py::arg("game"), py::arg("x"), py::arg("lambda_"), py::arg("eps"), py::arg("p") = 2);
  m.def("kkt_residual",
        [](const Game& g, const Vector& x, const Vector& lambda, double eps, int p) {
          return kkt_residual(g, make_point(g, x, lambda), Smoothing{eps, p}).stacked();
        },
        py::arg("game"), py::arg("x"), py::arg("lambda_"), py::arg("eps"), py::arg("p") = 2);
  m.def("jacobian",
        [](const Game& g, const Vector& x, const Vector& lambda, double eps, int p) {
          return generalized_jacobian(g, make_point(g, x, lambda), Smoothing{eps, p}).assembled();
        },
        py::arg("game"), py::arg("x"), py::arg("lambda_"), py::arg("eps"), py::arg("p") = 2);

  m.def("newton_solve",
        [](const Game& g, double eps, std::optional<Vector> x0, std::optional<Vector> lambda0,
           double tol, int p) {
          NewtonConfig cfg;
          cfg.tol = tol;
          const InnerResult r = newton_solve(g, make_point(g, x0, lambda0), Smoothing{eps, p}, cfg);
          py::dict out;
          out["x"] = r.z.x;
          out["lambda"] = r.z.lambda;
          out["merit"] = r.merit;
          out["iterations"] = r.iterations;
          out["converged"] = r.converged;
          out["status"] = to_string(r.status);
          return out;
        },
        py::arg("game"), py::arg("eps"), py::arg("x0") = py::none(), py::arg("lambda0") = py::none(),
        py::arg("tol") = 1e-10, py::arg("p") = 2);

  m.def("taylor_direction",
        [](const Game& g, const Vector& x, double eps, int p) {
          return taylor_direction(g, x, Smoothing{eps, p});
        },
        py::arg("game"), py::arg("x"), py::arg("eps"), py::arg("p") = 2);

  m.def("solve",
        [](const Game& g, const std::string& method, double eps0, double gamma, double eps_min,
           bool taylor, double tol, int p, std::optional<Vector> x0, std::optional<Vector> lambda0,
           std::optional<std::uint64_t> seed) {
          HomotopyConfig cfg;
          cfg.method = parse_inner_method(method);
          cfg.eps0 = eps0;
          cfg.gamma = gamma;
          cfg.eps_min = eps_min;
          cfg.taylor = taylor;
          cfg.p = p;
          cfg.newton.tol = tol;
          cfg.subgradient.tol = tol;
          const PrimalDualPoint z0 = seed ? random_initial_point(g, *seed) : make_point(g, x0, lambda0);
          const HomotopyTrace trace = homotopy_solve(g, z0, cfg);
          if (!trace.completed) return to_python(solve_report(g, cfg, z0, trace, nullptr, nullptr));
          const CertificationTolerance tolerance =
              certification_tolerance(g, trace.final_point(), trace.final_eps(), tol, 1e-5, 1e-6, p);
          const Certificate cert = certify(g, trace.final_point(), trace.final_eps(), tolerance, p);
          return to_python(solve_report(g, cfg, z0, trace, &cert, &tolerance));
        },
        py::arg("game"), py::arg("method") = "newton", py::arg("eps0") = 1.6,
        py::arg("gamma") = 0.5, py::arg("eps_min") = 1e-6, py::arg("taylor") = true,
        py::arg("tol") = 1e-10, py::arg("p") = 2, py::arg("x0") = py::none(),
        py::arg("lambda0") = py::none(), py::arg("seed") = py::none(),
        "Homotopy solve; returns the same report dict the CLI writes.");

  m.def("best_response_oracle",
        [](const Game& g, std::size_t nu, const Vector& x) {
          const OracleResult r = best_response_qp_oracle(g, nu, x);
          py::dict out;
          out["feasible"] = r.feasible;
          out["x"] = r.x_nu;
          out["objective"] = r.objective;
          return out;
        },
        py::arg("game"), py::arg("nu"), py::arg("x"));

  m.def("certify",
        [](const Game& g, const Vector& x, std::optional<Vector> lambda, double eps_final,
           double nash_tol, double s_stationarity_tol, int p) {
          const PrimalDualPoint z{x, lambda ? *lambda : estimate_multipliers(g, x, eps_final, p)};
          const Certificate cert = certify(g, make_point(g, z.x, z.lambda), eps_final,
                                           {nash_tol, s_stationarity_tol}, p);
          return to_python(to_json(cert));
        },
        py::arg("game"), py::arg("x"), py::arg("lambda_") = py::none(), py::arg("eps_final") = 1e-6,
        py::arg("nash_tol") = 1e-5, py::arg("s_stationarity_tol") = 1e-6, py::arg("p") = 2);
}
