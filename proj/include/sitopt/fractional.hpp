#pragma once

#include "sitopt/convex.hpp"
#include "sitopt/lp.hpp"

#include <vector>

namespace sitopt {

/// max (num . v) / (den . v) over the LP feasible set (the LP's own cost is
/// ignored). Requires den > 0 on the domain. Uses the Charnes-Cooper
/// transformation; a constant denominator reduces to one LP.
SubSolution solve_linear_fractional(const Affine& num, const Affine& den, const LinearProgram& domain,
                                    double tol = 1e-9);

/// max_v min_j num_j(v) / den_j(v) over an LP domain with affine data.
/// A single ratio goes through Charnes-Cooper; several ratios use the
/// normalized generalized Dinkelbach iteration with LP subproblems.
SubSolution solve_min_ratio_lp(const std::vector<Affine>& nums, const std::vector<Affine>& dens,
                               const LinearProgram& domain, double tol = 1e-9);

/// max_v min_j num_j(v) / den_j(v) with num_j concave and den_j positive. For
/// ratios that stay nonnegative, den_j may be convex; otherwise den_j must be affine
/// so every Dinkelbach subproblem is convex. The domain's objective is ignored.
SubSolution solve_min_ratio_convex(const std::vector<Term>& nums, const std::vector<Term>& dens,
                                   const SmoothConvexProgram& domain, double tol = 1e-8);

}  // namespace sitopt
