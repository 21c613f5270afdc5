#pragma once

#include "sitopt/term.hpp"

#include <string>

namespace sitopt {

enum class SubStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SubStatus s);

struct SubSolution {
  SubStatus status = SubStatus::NumericalFailure;
  Vec point;
  double objective = 0.0;
  int iterations = 0;
  /// Row multipliers of the optimal basis (LP only). With the problem written
  /// as  min c'x, A_ub x <= b_ub, A_eq x = b_eq, the inequality multipliers are <= 0.
  Vec duals_ub;
  Vec duals_eq;
  /// Largest primal constraint violation at `point` (LP) or barrier KKT estimate (NLP).
  double kkt_residual = 0.0;

  bool optimal() const { return status == SubStatus::Optimal; }
};

/// min cost'x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  lower <= x <= upper.
/// Bounds may be +-infinity; empty matrices are allowed.
struct LinearProgram {
  Vec cost;
  Mat a_ub;
  Vec b_ub;
  Mat a_eq;
  Vec b_eq;
  Vec lower;
  Vec upper;

  explicit LinearProgram(Index n = 0);

  Index num_vars() const { return cost.size(); }
  void add_le(const Vec& a, double b);
  void add_eq(const Vec& a, double b);
  /// Largest violation of rows and bounds at x.
  double violation(const Vec& x) const;
  void check() const;
};

/// Dense two-phase primal simplex. Dantzig pricing, switching to Bland's rule
/// after 2(m+n) consecutive degenerate pivots.
SubSolution solve_lp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace sitopt
