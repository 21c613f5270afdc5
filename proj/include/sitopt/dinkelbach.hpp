#pragma once

#include "sitopt/engine.hpp"
#include "sitopt/problem.hpp"

#include <vector>

namespace sitopt {

struct DinkelbachStep {
  double lambda = 0.0;
  double F = 0.0;      // max f+ - lambda f- found by the inner solve
  double inner_eta = 0.0;
  long nodes = 0;
  SolveStatus status = SolveStatus::EssentialOptimal;
};

struct DinkelbachOutcome {
  SolveOutcome outcome;  // nodes and subproblems summed over all inner solves
  std::vector<DinkelbachStep> history;
  double lambda = 0.0;
};

/// Dinkelbach's iteration for a single-ratio problem with the SIT engine as
/// the inner global solver. Starts at lambda = 0 and stops once F(lambda) <=
/// lambda_tol. The inner eta starts at lambda_tol / 10 and halves every outer
/// iteration (floor 1e-9). Throws MaxOuterIterations after max_outer steps.
DinkelbachOutcome dinkelbach_solve(const StructuredProblem& p, const SolverConfig& cfg, double lambda_tol = 1e-4,
                                   int max_outer = 50);

}  // namespace sitopt
