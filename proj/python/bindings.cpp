#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ssgbnp/bench.hpp"
#include "ssgbnp/engine.hpp"
#include "ssgbnp/instgen.hpp"
#include "ssgbnp/oracle.hpp"

namespace py = pybind11;
using namespace ssgbnp;

namespace {

std::vector<int> targets_of(const Column& c) {
  std::vector<int> out;
  for (int j = 0; j < c.size(); ++j) {
    if (c.covers(j)) out.push_back(j);
  }
  return out;
}

py::dict strategy_dict(const MixedStrategy& s) {
  py::list support;
  for (const auto& e : s.support) support.append(py::make_tuple(targets_of(e.column), e.probability));
  py::list responses;
  for (const auto& r : s.responses) responses.append(r.target);
  py::dict d;
  d["support"] = support;
  d["responses"] = responses;
  return d;
}

FormulationSpec make_spec(const std::string& formulation, const std::string& cuts) {
  return {parse_formulation(formulation), parse_cut_scope(cuts)};
}

SolveOptions make_options(std::optional<int> init_cols, int pricer_cols, std::optional<double> stabilize,
                          double time_limit, std::uint64_t seed) {
  SolveOptions o;
  o.init_cols = init_cols.value_or(-1);
  o.pricer_cols = pricer_cols;
  o.delta = stabilize;
  o.time_limit_s = time_limit;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Branch-and-price solver for budget-constrained Bayesian Stackelberg security games.";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SizeGuard>(m, "SizeGuard", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  py::class_<GameSSG>(m, "GameSSG", "Security game; payoff tables are indexed [attacker][target].")
      .def(py::init<>())
      .def_readwrite("n_targets", &GameSSG::n_targets)
      .def_readwrite("n_attackers", &GameSSG::n_attackers)
      .def_readwrite("p", &GameSSG::p)
      .def_readwrite("d_prot", &GameSSG::d_prot)
      .def_readwrite("d_unprot", &GameSSG::d_unprot)
      .def_readwrite("a_prot", &GameSSG::a_prot)
      .def_readwrite("a_unprot", &GameSSG::a_unprot)
      .def_readwrite("w", &GameSSG::w)
      .def_readwrite("budget", &GameSSG::budget)
      .def_readwrite("seed", &GameSSG::seed)
      .def("validate", [](GameSSG& g) { validate(g); })
      .def("to_json", [](const GameSSG& g) { return render_instance(g); })
      .def(py::self == py::self)
      .def("__repr__", [](const GameSSG& g) {
        return "GameSSG(n_targets=" + std::to_string(g.n_targets) +
               ", n_attackers=" + std::to_string(g.n_attackers) + ")";
      });

  py::class_<GameSG>(m, "GameSG", "Generic Bayesian Stackelberg game with explicit strategies.")
      .def(py::init<>())
      .def_readwrite("R", &GameSG::R)
      .def_readwrite("C", &GameSG::C)
      .def_readwrite("p", &GameSG::p)
      .def("validate", [](GameSG& g) { validate(g); })
      .def("to_json", [](const GameSG& g) { return render_instance(g); })
      .def(py::self == py::self);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("status", [](const SolveReport& r) { return to_string(r.status); })
      .def_readonly("objective", &SolveReport::objective)
      .def_readonly("best_bound", &SolveReport::best_bound)
      .def_readonly("time_s", &SolveReport::wall_time_s)
      .def_readonly("nodes", &SolveReport::nodes)
      .def_readonly("root_lp_value", &SolveReport::root_lp_value)
      .def_readonly("root_gap_pct", &SolveReport::root_gap_pct)
      .def_readonly("columns_generated", &SolveReport::columns_generated)
      .def_readonly("pricing_iterations", &SolveReport::pricing_iterations)
      .def_readonly("farkas_calls", &SolveReport::farkas_calls)
      .def_readonly("mispricings", &SolveReport::mispricings)
      .def_readonly("initial_columns", &SolveReport::initial_columns)
      .def_readonly("formulation", &SolveReport::formulation)
      .def_readonly("cuts", &SolveReport::cuts)
      .def("to_json", [](const SolveReport& r) { return report_json(r); });

  m.def("generate", &generate, py::arg("n_targets"), py::arg("n_attackers"), py::arg("h"), py::arg("H") = 5,
        py::arg("seed") = 0, "Seeded random instance.");
  m.def("instance_filename", &instance_filename, py::arg("n_targets"), py::arg("n_attackers"), py::arg("h"),
        py::arg("seed"));
  m.def("load", &load_instance, py::arg("path"), "Read a GameSSG or GameSG file.");
  m.def("parse", &parse_instance, py::arg("text"));
  m.def(
      "save", [](const Instance& inst, const std::filesystem::path& path) { save_instance(inst, path); },
      py::arg("game"), py::arg("path"));

  m.def(
      "solve",
      [](const GameSSG& g, const std::string& formulation, const std::string& cuts, std::optional<int> init_cols,
         int pricer_cols, std::optional<double> stabilize, double time_limit, std::uint64_t seed) {
        const auto spec = make_spec(formulation, cuts);
        const auto opts = make_options(init_cols, pricer_cols, stabilize, time_limit, seed);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(g, spec, opts);
        }
        return py::make_tuple(r.report, strategy_dict(r.strategy));
      },
      py::arg("game"), py::arg("formulation") = "d2plus", py::arg("cuts") = "both",
      py::arg("init_cols") = py::none(), py::arg("pricer_cols") = 1, py::arg("stabilize") = py::none(),
      py::arg("time_limit") = 3600.0, py::arg("seed") = 0,
      "Branch-and-price. Returns (SolveReport, {'support': [(targets, prob)], 'responses': [target per type]}).\n"
      "Target indices are 0-based.");

  m.def(
      "solve_sg",
      [](const GameSG& g, const std::string& formulation, const std::string& cuts, double time_limit) {
        SolveOptions opts;
        opts.time_limit_s = time_limit;
        SgSolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_sg(g, make_spec(formulation, cuts), opts);
        }
        return py::make_tuple(r.report, r.x, r.responses);
      },
      py::arg("game"), py::arg("formulation") = "d2plus", py::arg("cuts") = "both", py::arg("time_limit") = 3600.0);

  m.def(
      "root_lp",
      [](const GameSSG& g, const std::string& formulation, const std::string& cuts, std::optional<double> stabilize) {
        SolveOptions opts;
        opts.delta = stabilize;
        py::gil_scoped_release release;
        const auto r = solve_root_lp(g, make_spec(formulation, cuts), opts);
        return r.value;
      },
      py::arg("game"), py::arg("formulation") = "d2plus", py::arg("cuts") = "both",
      py::arg("stabilize") = py::none(), "Root relaxation value after column generation.");

  m.def(
      "solve_multiple_lps",
      [](const GameSSG& g) {
        const auto sol = solve_multiple_lps(g);
        return py::make_tuple(sol.value, strategy_dict(sol.strategy));
      },
      py::arg("game"), "Brute-force equilibrium over every affordable strategy (small games only).");

  m.def(
      "enumerate_strategies",
      [](const GameSSG& g) {
        std::vector<std::vector<int>> out;
        for (const auto& c : enumerate_P(g)) out.push_back(targets_of(c));
        return out;
      },
      py::arg("game"));

  m.def(
      "verify",
      [](int count, std::uint64_t seed, double perturb) {
        py::gil_scoped_release release;
        return verify(verify_battery(count, seed), all_variants(), perturb).failures;
      },
      py::arg("count") = 50, py::arg("seed") = 0, py::arg("perturb") = 0.0,
      "Engine against the oracle on a seeded battery; returns the list of failures.");
}
