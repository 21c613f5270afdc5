#include "sitopt/fractional.hpp"

#include "sitopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDinkelbach = 100;

double min_ratio(const std::vector<Affine>& nums, const std::vector<Affine>& dens, const Vec& v) {
  double r = kInf;
  for (size_t j = 0; j < nums.size(); ++j) r = std::min(r, nums[j](v) / dens[j](v));
  return r;
}

double min_ratio(const std::vector<Term>& nums, const std::vector<Term>& dens, const Vec& v) {
  double r = kInf;
  for (size_t j = 0; j < nums.size(); ++j) r = std::min(r, nums[j].value(v) / dens[j].value(v));
  return r;
}

}  // namespace

SubSolution solve_linear_fractional(const Affine& num, const Affine& den, const LinearProgram& domain,
                                    double tol) {
  const Index n = domain.num_vars();
  if (num.dim() != n || den.dim() != n)
    throw Error(ErrorCode::InvalidInput, "ratio dimension does not match the domain");
  if (den.is_constant()) {
    if (!(den.offset > 0.0)) throw Error(ErrorCode::InvalidInput, "denominator must be positive");
    LinearProgram lp = domain;
    lp.cost = -num.coef;
    SubSolution s = solve_lp(lp, tol);
    if (s.optimal()) s.objective = num(s.point) / den.offset;
    return s;
  }

  // y = s v, s = 1 / den(v):  max num.c y + num.d s  s.t.  den.c y + den.d s = 1,
  // A y - b s <= 0, E y - e s = 0, l s <= y <= u s, s >= 0.
  LinearProgram cc(n + 1);
  cc.cost.head(n) = -num.coef;
  cc.cost[n] = -num.offset;
  cc.lower.head(n).setConstant(-kInf);
  cc.lower[n] = 0.0;
  Vec row(n + 1);
  row.head(n) = den.coef;
  row[n] = den.offset;
  cc.add_eq(row, 1.0);
  for (Index i = 0; i < domain.a_ub.rows(); ++i) {
    row.head(n) = domain.a_ub.row(i).transpose();
    row[n] = -domain.b_ub[i];
    cc.add_le(row, 0.0);
  }
  for (Index i = 0; i < domain.a_eq.rows(); ++i) {
    row.head(n) = domain.a_eq.row(i).transpose();
    row[n] = -domain.b_eq[i];
    cc.add_eq(row, 0.0);
  }
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(domain.lower[j])) {
      row.setZero();
      row[j] = -1.0;
      row[n] = domain.lower[j];
      cc.add_le(row, 0.0);
    }
    if (std::isfinite(domain.upper[j])) {
      row.setZero();
      row[j] = 1.0;
      row[n] = -domain.upper[j];
      cc.add_le(row, 0.0);
    }
  }
  SubSolution s = solve_lp(cc, tol);
  if (!s.optimal()) return s;
  double scale = s.point[n];
  if (!(scale > 0.0)) {
    s.status = SubStatus::Unbounded;
    return s;
  }
  SubSolution out;
  out.status = SubStatus::Optimal;
  out.iterations = s.iterations;
  out.point = s.point.head(n) / scale;
  out.objective = num(out.point) / den(out.point);
  out.kkt_residual = domain.violation(out.point);
  return out;
}

SubSolution solve_min_ratio_lp(const std::vector<Affine>& nums, const std::vector<Affine>& dens,
                               const LinearProgram& domain, double tol) {
  if (nums.empty() || nums.size() != dens.size())
    throw Error(ErrorCode::InvalidInput, "ratio lists must be nonempty and of equal length");
  if (nums.size() == 1) return solve_linear_fractional(nums[0], dens[0], domain, tol);

  const Index n = domain.num_vars();
  LinearProgram feas = domain;
  feas.cost.setZero();
  SubSolution cur = solve_lp(feas, tol);
  if (!cur.optimal()) return cur;
  int iters = cur.iterations;
  double lambda = min_ratio(nums, dens, cur.point);

  // max t  s.t.  t <= (num_j(v) - lambda den_j(v)) / den_j(v_prev)
  for (int k = 0; k < kMaxDinkelbach; ++k) {
    LinearProgram lp(n + 1);
    lp.cost[n] = -1.0;
    lp.lower.head(n) = domain.lower;
    lp.upper.head(n) = domain.upper;
    lp.lower[n] = -kInf;
    lp.a_ub = Mat::Zero(domain.a_ub.rows(), n + 1);
    lp.a_ub.leftCols(n) = domain.a_ub;
    lp.b_ub = domain.b_ub;
    lp.a_eq = Mat::Zero(domain.a_eq.rows(), n + 1);
    lp.a_eq.leftCols(n) = domain.a_eq;
    lp.b_eq = domain.b_eq;
    for (size_t j = 0; j < nums.size(); ++j) {
      double w = 1.0 / dens[j](cur.point);
      Vec row(n + 1);
      row.head(n) = -w * (nums[j].coef - lambda * dens[j].coef);
      row[n] = 1.0;
      lp.add_le(row, w * (nums[j].offset - lambda * dens[j].offset));
    }
    SubSolution s = solve_lp(lp, tol);
    iters += s.iterations;
    if (!s.optimal()) {
      s.iterations = iters;
      return s;
    }
    double f = -s.objective;
    Vec v = s.point.head(n);
    double next = min_ratio(nums, dens, v);
    if (next >= lambda) {
      cur.point = v;
      lambda = next;
    }
    if (f <= tol * (1.0 + std::abs(lambda))) break;
  }
  SubSolution out;
  out.status = SubStatus::Optimal;
  out.point = cur.point;
  out.objective = lambda;
  out.iterations = iters;
  out.kkt_residual = domain.violation(out.point);
  return out;
}

SubSolution solve_min_ratio_convex(const std::vector<Term>& nums, const std::vector<Term>& dens,
                                   const SmoothConvexProgram& domain, double tol) {
  if (nums.empty() || nums.size() != dens.size())
    throw Error(ErrorCode::InvalidInput, "ratio lists must be nonempty and of equal length");
  SmoothConvexProgram feas = domain;
  feas.objective_terms.clear();
  SubSolution cur = solve_convex(feas, tol);
  if (!cur.optimal()) return cur;
  int iters = cur.iterations;
  double lambda = min_ratio(nums, dens, cur.point);
  if (!std::isfinite(lambda)) {
    cur.status = SubStatus::NumericalFailure;
    return cur;
  }

  for (int k = 0; k < kMaxDinkelbach; ++k) {
    SmoothConvexProgram sub = domain;
    sub.objective_terms.clear();
    sub.start = cur.point;
    for (size_t j = 0; j < nums.size(); ++j) {
      double w = 1.0 / dens[j].value(cur.point);
      Term t = w * (lambda * dens[j] - nums[j]);
      if (!t.is_convex())
        throw Error(ErrorCode::InvalidInput, "ratio subproblem is not convex at the current level");
      sub.objective_terms.push_back(std::move(t));
    }
    SubSolution s = solve_convex(sub, tol);
    iters += s.iterations;
    if (!s.optimal()) {
      s.iterations = iters;
      return s;
    }
    double f = -s.objective;
    double next = min_ratio(nums, dens, s.point);
    if (next >= lambda) {
      cur.point = s.point;
      lambda = next;
    }
    if (f <= 10 * tol * (1.0 + std::abs(lambda))) break;
  }
  SubSolution out;
  out.status = SubStatus::Optimal;
  out.point = cur.point;
  out.objective = lambda;
  out.iterations = iters;
  return out;
}

}  // namespace sitopt
