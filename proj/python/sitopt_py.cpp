#include "sitopt/bench.hpp"
#include "sitopt/channels.hpp"
#include "sitopt/dinkelbach.hpp"
#include "sitopt/engine.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"
#include "sitopt/problem.hpp"
#include "sitopt/problem_json.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sitopt;

namespace {

std::array<Complex, 3> three(const std::vector<Complex>& h) {
  if (h.size() != 3) throw Error(ErrorCode::InvalidInput, "MWRC channel needs three coefficients");
  return {h[0], h[1], h[2]};
}

ObjectiveSpec mwrc_objective(const std::string& name) {
  if (name == "sum-rate") return mwrc_sum_rate();
  if (name == "gee") return mwrc_gee();
  throw Error(ErrorCode::InvalidInput, "objective must be sum-rate or gee");
}

Identification identification(const std::string& name) {
  if (name == "tight") return Identification::Tight;
  if (name == "separable") return Identification::Separable;
  throw Error(ErrorCode::InvalidInput, "identification must be tight or separable");
}

}  // namespace

PYBIND11_MODULE(_sitopt, m) {
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "SitoptError", PyExc_RuntimeError);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("EssentialOptimal", SolveStatus::EssentialOptimal)
      .value("EssentialInfeasible", SolveStatus::EssentialInfeasible)
      .value("NodeBudgetExceeded", SolveStatus::NodeBudgetExceeded);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &SolverConfig::epsilon)
      .def_readwrite("eta", &SolverConfig::eta)
      .def_readwrite("gamma0", &SolverConfig::gamma0)
      .def_readwrite("max_nodes", &SolverConfig::max_nodes)
      .def_readwrite("feas_tol", &SolverConfig::feas_tol)
      .def_readwrite("lp_tol", &SolverConfig::lp_tol)
      .def_readwrite("nlp_tol", &SolverConfig::nlp_tol);

  py::class_<StructuredProblem>(m, "Problem")
      .def_readonly("name", &StructuredProblem::name)
      .def_readonly("n_global", &StructuredProblem::n_global)
      .def_readonly("n_nonglobal", &StructuredProblem::n_nonglobal)
      .def_property_readonly("dim", &StructuredProblem::dim)
      .def("max_constraint", &StructuredProblem::max_constraint, py::arg("v"))
      .def("ratio", &StructuredProblem::ratio, py::arg("v"))
      .def("domain_violation", &StructuredProblem::domain_violation, py::arg("v"))
      .def("validate", [](const StructuredProblem& p) { return validate_problem(p).violations; })
      .def("to_json", &problem_to_json)
      .def_static("from_json", &problem_from_json, py::arg("text"));

  py::class_<SolveOutcome>(m, "SolveOutcome")
      .def_readonly("status", &SolveOutcome::status)
      .def_readonly("objective_value", &SolveOutcome::objective_value)
      .def_readonly("nodes_expanded", &SolveOutcome::nodes_expanded)
      .def_readonly("subproblems_solved", &SolveOutcome::subproblems_solved)
      .def_readonly("wall_time", &SolveOutcome::wall_time)
      .def_property_readonly("point", [](const SolveOutcome& o) -> std::optional<Vec> {
        if (!o.incumbent.set()) return std::nullopt;
        return o.incumbent.point();
      });

  py::class_<DinkelbachStep>(m, "DinkelbachStep")
      .def_readonly("lam", &DinkelbachStep::lambda)
      .def_readonly("F", &DinkelbachStep::F)
      .def_readonly("inner_eta", &DinkelbachStep::inner_eta)
      .def_readonly("nodes", &DinkelbachStep::nodes);

  py::class_<DinkelbachOutcome>(m, "DinkelbachOutcome")
      .def_readonly("outcome", &DinkelbachOutcome::outcome)
      .def_readonly("history", &DinkelbachOutcome::history)
      .def_readonly("lam", &DinkelbachOutcome::lambda);

  m.def(
      "solve",
      [](const StructuredProblem& p, const SolverConfig& cfg, std::function<void(py::dict)> trace) {
        TraceSink sink;
        if (trace) {
          sink = [&trace](const TraceRecord& r) {
            py::dict d;
            d["k"] = r.k;
            d["lower"] = r.lower;
            d["upper"] = r.upper;
            d["beta"] = r.beta;
            d["action"] = to_string(r.action);
            d["gamma"] = r.gamma;
            if (r.incumbent.size()) d["incumbent"] = r.incumbent;
            trace(d);
          };
        }
        return solve(p, cfg, sink);
      },
      py::arg("problem"), py::arg("config") = SolverConfig{}, py::arg("trace") = nullptr);

  m.def("dinkelbach_solve", &dinkelbach_solve, py::arg("problem"), py::arg("config") = SolverConfig{},
        py::arg("lambda_tol") = 1e-4, py::arg("max_outer") = 50);

  m.def("example1", &example1);
  m.def("example2", &example2);

  m.def(
      "channel",
      [](std::uint64_t seed, long index, const std::string& model, int K) {
        ChannelModel cm = model == "gic" ? ChannelModel::Gic : ChannelModel::Mwrc;
        if (model != "gic" && model != "mwrc") throw Error(ErrorCode::InvalidInput, "model must be mwrc or gic");
        return generate_channel(seed, index, cm, K).h;
      },
      py::arg("seed"), py::arg("index"), py::arg("model") = "mwrc", py::arg("K") = 3);

  m.def(
      "gic",
      [](int K, int kappa, const std::vector<Complex>& h, const std::string& id) {
        return build_gic(make_gic(K, kappa, h), identification(id));
      },
      py::arg("K"), py::arg("kappa"), py::arg("h"), py::arg("identification") = "tight");

  m.def(
      "mwrc",
      [](const std::vector<Complex>& h, double snr_db, int config, const std::string& objective,
         const std::string& id) {
        return build_mwrc_snd(make_mwrc_channel(three(h), snr_db), decode_config(config), mwrc_objective(objective),
                              identification(id));
      },
      py::arg("h"), py::arg("snr_db") = 10.0, py::arg("config") = 7, py::arg("objective") = "sum-rate",
      py::arg("identification") = "tight");

  m.def(
      "solve_mwrc_snd",
      [](const std::vector<Complex>& h, double snr_db, const std::string& objective, const std::string& id,
         const SolverConfig& cfg) {
        MwrcSndResult r = solve_mwrc_snd(make_mwrc_channel(three(h), snr_db), mwrc_objective(objective),
                                         identification(id), cfg);
        return py::make_tuple(r.best, r.best_config);
      },
      py::arg("h"), py::arg("snr_db") = 10.0, py::arg("objective") = "sum-rate", py::arg("identification") = "tight",
      py::arg("config") = SolverConfig{});

  m.def(
      "run_benchmark",
      [](const std::string& config_json) {
        py::list rows;
        for (const auto& r : run_benchmark(BenchConfig::from_json(config_json))) {
          py::dict d;
          d["seed"] = r.seed;
          d["idx"] = r.idx;
          d["snr_db"] = r.snr_db;
          d["scheme"] = r.scheme;
          d["value"] = r.value;
          d["status"] = r.status;
          d["nodes"] = r.nodes;
          d["subs"] = r.subs;
          d["wall_time_s"] = r.wall_time_s;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config_json"));
}
