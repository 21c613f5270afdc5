#include "sitopt/dinkelbach.hpp"

#include "sitopt/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace sitopt {

DinkelbachOutcome dinkelbach_solve(const StructuredProblem& p, const SolverConfig& cfg, double lambda_tol,
                                   int max_outer) {
  if (p.objective.size() != 1)
    throw Error(ErrorCode::InvalidInput, "Dinkelbach's method needs exactly one ratio pair");
  if (!(lambda_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "lambda_tol must be positive");
  if (max_outer < 1) throw Error(ErrorCode::InvalidInput, "max_outer must be at least 1");

  const auto t0 = std::chrono::steady_clock::now();
  const RatioPair& ratio = p.objective.front();
  const BoxRegion box0 = initial_box(p, cfg.lp_tol);
  Vec lo = p.domain.lower, hi = p.domain.upper;
  lo.head(p.n_global) = box0.lower;
  hi.head(p.n_global) = box0.upper;

  DinkelbachOutcome res;
  SolveOutcome& out = res.outcome;
  double lambda = 0.0;
  double eta = lambda_tol / 10.0;
  for (int t = 0; t < max_outer; ++t) {
    StructuredProblem inner = p;
    Term f = ratio.num - lambda * ratio.den;
    inner.objective = {{f, Term::constant(p.dim(), 1.0)}};
    Interval r = f.range(lo, hi);
    inner.gamma0 = std::isfinite(r.lo) ? r.lo : 0.0;

    SolverConfig icfg = cfg;
    icfg.eta = std::max(eta, 1e-9);
    icfg.gamma0.reset();
    SolveOutcome in = solve(inner, icfg);
    out.nodes_expanded += in.nodes_expanded;
    out.subproblems_solved += in.subproblems_solved;

    DinkelbachStep step;
    step.lambda = lambda;
    step.inner_eta = icfg.eta;
    step.nodes = in.nodes_expanded;
    step.status = in.status;
    if (!in.incumbent.set()) {
      step.F = -std::numeric_limits<double>::infinity();
      res.history.push_back(step);
      out.status = in.status;
      break;
    }
    step.F = in.incumbent.value;
    res.history.push_back(step);

    // Keep the best ratio seen; a slightly negative F can make the last point worse.
    const Vec z = in.incumbent.point();
    const double value = p.ratio(z);
    if (!out.incumbent.set() || value > out.incumbent.value) {
      out.incumbent = in.incumbent;
      out.incumbent.value = value;
      out.incumbent.gamma = value + cfg.eta;
    }
    out.status = in.status;
    res.lambda = value;
    if (step.F <= lambda_tol || in.status == SolveStatus::NodeBudgetExceeded) break;
    if (t + 1 == max_outer) throw Error(ErrorCode::MaxOuterIterations, "Dinkelbach iteration did not converge");
    lambda = value;
    eta *= 0.5;
  }
  out.objective_value = out.incumbent.set() ? out.incumbent.value : std::numeric_limits<double>::quiet_NaN();
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace sitopt
