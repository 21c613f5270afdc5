#pragma once

#include "sitopt/lp.hpp"
#include "sitopt/term.hpp"

#include <optional>
#include <vector>

namespace sitopt {

/// min_v max_i objective_terms[i](v)
/// s.t. inequalities[k](v) <= 0, a_eq v = b_eq, lower <= v <= upper.
/// All terms must be convex. An empty objective turns this into a feasibility problem.
struct SmoothConvexProgram {
  Index num_vars = 0;
  std::vector<Term> objective_terms;
  std::vector<Term> inequalities;
  Mat a_eq;
  Vec b_eq;
  Vec lower;
  Vec upper;
  std::optional<Vec> start;

  explicit SmoothConvexProgram(Index n = 0);
  void check() const;
};

/// Log barrier of the epigraph form over z = (v, t) (t omitted for feasibility
/// problems):  tau * t - sum log(-F_k(z)) with F_k ranging over the epigraph
/// rows, the inequalities and the finite bounds. Equalities are not included.
/// Returns +inf outside the strict interior.
double barrier_value(const SmoothConvexProgram& p, const Vec& z, double tau, Vec* grad = nullptr);

/// Log-barrier interior-point method. Equalities and fixed variables are
/// eliminated, a phase-1 problem supplies a strictly feasible start, each outer
/// iteration multiplies the barrier weight by 10 until the duality gap bound
/// m / tau falls below tol. One retry from a perturbed start is made after a
/// numerical failure.
SubSolution solve_convex(const SmoothConvexProgram& p, double tol = 1e-8);

}  // namespace sitopt
