#pragma once

#include "sitopt/lp.hpp"
#include "sitopt/problem.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace sitopt {

struct SolverConfig {
  double epsilon = 1e-5;
  double eta = 0.01;
  /// Starting gamma; falls back to the problem's hint, then 0.
  std::optional<double> gamma0;
  long max_nodes = 1000000;
  double feas_tol = 1e-7;
  double lp_tol = 1e-9;
  double nlp_tol = 1e-8;
  /// Used by the problem builders; the engine itself does not read it.
  Identification identification = Identification::Tight;

  void check() const;
};

struct Incumbent {
  std::optional<Vec> x_bar;
  std::optional<Vec> xi_bar;
  double gamma = 0.0;
  double value = 0.0;

  bool set() const { return x_bar.has_value(); }
  /// (x_bar, xi_bar) as one variable vector.
  Vec point() const;
};

/// Step-4 update rule: accept when no incumbent exists or value > gamma - eta,
/// then gamma = value + eta. Returns true when the incumbent changed.
bool offer(Incumbent& inc, const Vec& x, const Vec& xi, double value, double eta);

enum class SolveStatus { EssentialOptimal, EssentialInfeasible, NodeBudgetExceeded };
const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::EssentialInfeasible;
  Incumbent incumbent;
  double objective_value = 0.0;  // NaN when no incumbent exists
  long nodes_expanded = 0;
  long subproblems_solved = 0;
  double wall_time = 0.0;  // seconds
};

struct BoundResult {
  double beta = 0.0;
  Vec x_witness;
  Vec y_witness;
  std::optional<Vec> xi_witness;
  SubStatus status = SubStatus::Optimal;
};

enum class TraceAction { Retain, Delete, IncumbentUpdate };
const char* to_string(TraceAction a);

struct TraceRecord {
  long k = 0;
  Vec lower;
  Vec upper;
  double beta = 0.0;
  TraceAction action = TraceAction::Retain;
  double gamma = 0.0;
  /// (x_bar, xi_bar) after an incumbent update, empty otherwise.
  Vec incumbent;
};
using TraceSink = std::function<void(const TraceRecord&)>;

/// Successive incumbent transcending branch and bound for a StructuredProblem.
class SitSolver {
 public:
  explicit SitSolver(StructuredProblem problem, SolverConfig config = {});

  const StructuredProblem& problem() const { return problem_; }
  const SolverConfig& config() const { return config_; }
  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

  /// Lower bound of the dual problem over the box at level gamma; +inf when the
  /// bounding problem is infeasible. Throws NumericalFailure when the
  /// subsolver fails twice.
  BoundResult bound(const BoxRegion& box, double gamma);
  /// A non-global part xi with g_i(x, xi) <= feas_tol / 2 and (x, xi) in C.
  std::optional<Vec> check_feasibility(const Vec& x);
  /// Best ratio over xi at fixed x, offered to the incumbent.
  Incumbent improve_incumbent(const Vec& x, const Incumbent& inc);
  SolveOutcome solve();

  long subproblems_solved() const { return subproblems_; }
  double starting_gamma() const;

 private:
  struct Best {
    Vec xi;
    double value;
  };
  struct LinearForm;

  std::optional<Best> best_at(const Vec& x);
  Vec clamp_global(const Vec& x) const;

  StructuredProblem problem_;
  /// Set when every term splits into an x-part plus an affine xi-part; the
  /// subproblems at fixed x are then assembled from cached coefficients.
  std::shared_ptr<const LinearForm> linear_;
  SolverConfig config_;
  TraceSink trace_;
  long subproblems_ = 0;
};

/// Splits along j = argmax |y_j - x_j| (lowest index on ties) at (x_j + y_j) / 2;
/// falls back to the widest edge's midpoint when x and y (numerically) coincide.
/// Throws ZeroVolumeBox when every edge has zero length.
std::pair<BoxRegion, BoxRegion> bisect(const BoxRegion& box, const Vec& x, const Vec& y);

BoundResult bound(const StructuredProblem& p, const BoxRegion& box, double gamma, const SolverConfig& cfg = {});
std::optional<Vec> check_feasibility(const StructuredProblem& p, const Vec& x, const SolverConfig& cfg = {});
Incumbent improve_incumbent(const StructuredProblem& p, const Vec& x, const Incumbent& inc,
                            const SolverConfig& cfg = {});
SolveOutcome solve(const StructuredProblem& p, const SolverConfig& cfg = {}, TraceSink trace = {});

}  // namespace sitopt
