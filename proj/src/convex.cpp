#include "sitopt/convex.hpp"

#include "sitopt/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier over z with linear cost: tau * cost'z - sum log(-F_k(z)).
struct Barrier {
  Index dim = 0;
  std::vector<Term> cons;
  Vec cost;

  double max_constraint(const Vec& z) const {
    double m = -kInf;
    for (const auto& f : cons) m = std::max(m, f.value(z));
    return m;
  }

  double eval(const Vec& z, double tau, Vec* g, Mat* h) const {
    double val = tau * cost.dot(z);
    if (g) *g = tau * cost;
    if (h) *h = Mat::Zero(dim, dim);
    Vec fg;
    Mat fh;
    for (const auto& f : cons) {
      double fv = f.evaluate(z, g ? &fg : nullptr, h ? &fh : nullptr);
      if (!(fv < 0.0)) return kInf;
      val -= std::log(-fv);
      if (g) *g -= fg / fv;
      if (h) {
        h->noalias() -= fh / fv;
        h->noalias() += (fg * fg.transpose()) / (fv * fv);
      }
    }
    return val;
  }
};

enum class Center { Ok, Stall, EarlyExit };

// Newton centering with feasibility-preserving Armijo backtracking.
template <class Stop>
Center center(const Barrier& b, Vec& z, double tau, int& iters, Stop&& early) {
  Vec g;
  Mat h;
  for (int it = 0; it < 200; ++it) {
    ++iters;
    double f0 = b.eval(z, tau, &g, &h);
    if (!std::isfinite(f0)) return Center::Stall;
    Eigen::LDLT<Mat> ldlt(h);
    Vec dz = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
      Mat hr = h + 1e-10 * (1.0 + h.diagonal().cwiseAbs().maxCoeff()) * Mat::Identity(b.dim, b.dim);
      dz = hr.ldlt().solve(-g);
      if (!dz.allFinite()) return Center::Stall;
    }
    double decrement = -g.dot(dz);
    if (decrement < 0) {
      dz = -g;
      decrement = g.squaredNorm();
    }
    if (decrement <= 1e-12) return Center::Ok;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls) {
      Vec zn = z + alpha * dz;
      double fn = b.eval(zn, tau, nullptr, nullptr);
      if (std::isfinite(fn) && fn <= f0 - 1e-4 * alpha * decrement) {
        z = zn;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return decrement <= 1e-7 ? Center::Ok : Center::Stall;
    if (early(z)) return Center::EarlyExit;
  }
  return Center::Ok;
}

struct BarrierResult {
  SubStatus status;
  double gap;
};

// Outer loop; stops when m/tau < tol, or when `early` fires.
template <class Stop>
BarrierResult run_barrier(const Barrier& b, Vec& z, double tol, int& iters, Stop&& early,
                          double unbounded_level) {
  const double m = static_cast<double>(std::max<size_t>(b.cons.size(), 1));
  double tau = 1.0;
  double gap = kInf;
  for (int outer = 0; outer < 60; ++outer) {
    Vec saved = z;
    Center c = center(b, z, tau, iters, early);
    if (c == Center::EarlyExit) return {SubStatus::Optimal, gap};
    if (c == Center::Stall) {
      z = saved;
      if (gap <= 1e-6) return {SubStatus::Optimal, gap};
      return {SubStatus::NumericalFailure, gap};
    }
    gap = m / tau;
    if (b.cost.dot(z) < unbounded_level) return {SubStatus::Unbounded, gap};
    if (gap < tol) return {SubStatus::Optimal, gap};
    tau *= 10.0;
  }
  return {SubStatus::Optimal, gap};
}

struct Reduced {
  Mat basis;  // v = base + basis * u
  Vec base;
  bool determined = false;
};

bool eliminate(const SmoothConvexProgram& p, Reduced& r) {
  const Index n = p.num_vars;
  std::vector<Index> fixed;
  for (Index j = 0; j < n; ++j)
    if (std::isfinite(p.lower[j]) && p.upper[j] - p.lower[j] <= 0.0) fixed.push_back(j);
  if (p.a_eq.rows() == 0) {
    r.base = Vec::Zero(n);
    r.basis = Mat::Zero(n, n - static_cast<Index>(fixed.size()));
    Index c = 0;
    size_t f = 0;
    for (Index j = 0; j < n; ++j) {
      if (f < fixed.size() && fixed[f] == j) {
        r.base[j] = p.lower[j];
        ++f;
      } else {
        r.basis(j, c++) = 1.0;
      }
    }
    r.determined = r.basis.cols() == 0;
    return true;
  }
  Index rows = p.a_eq.rows() + static_cast<Index>(fixed.size());
  Mat e = Mat::Zero(rows, n);
  Vec rhs(rows);
  e.topRows(p.a_eq.rows()) = p.a_eq;
  rhs.head(p.a_eq.rows()) = p.b_eq;
  for (size_t k = 0; k < fixed.size(); ++k) {
    e(p.a_eq.rows() + k, fixed[k]) = 1.0;
    rhs[p.a_eq.rows() + k] = p.lower[fixed[k]];
  }
  Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  Index rank = svd.rank();
  r.base = svd.solve(rhs);
  if ((e * r.base - rhs).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff()))
    return false;
  r.basis = svd.matrixV().rightCols(n - rank);
  r.determined = r.basis.cols() == 0;
  return true;
}

SubSolution solve_once(const SmoothConvexProgram& p, double tol, double perturb) {
  SubSolution out;
  Reduced red;
  if (!eliminate(p, red)) {
    out.status = SubStatus::Infeasible;
    return out;
  }
  const Index nu = red.basis.cols();
  const bool has_obj = !p.objective_terms.empty();
  const Index dim = nu + (has_obj ? 1 : 0);
  const double feas = 1e-9;

  auto finish = [&](const Vec& v) {
    out.point = v;
    for (Index j = 0; j < p.num_vars; ++j)
      if (std::isfinite(p.lower[j]) && p.upper[j] - p.lower[j] <= 0.0) out.point[j] = p.lower[j];
    out.objective = -kInf;
    for (const auto& f : p.objective_terms) out.objective = std::max(out.objective, f.value(out.point));
    if (!has_obj) out.objective = 0.0;
  };

  // Constraints over z = (u, t).
  Barrier b;
  b.dim = dim;
  b.cost = Vec::Zero(dim);
  if (has_obj) b.cost[nu] = 1.0;
  auto add = [&](const Term& t, bool epigraph) -> bool {
    Term c = t.compose(red.basis, red.base);
    if (!epigraph && c.is_constant()) return c.value(Vec::Zero(nu)) <= feas;
    Term z = c.embed(dim);
    if (epigraph) z -= Term::variable(dim, nu);
    b.cons.push_back(std::move(z));
    return true;
  };
  for (Index j = 0; j < p.num_vars; ++j) {
    if (std::isfinite(p.lower[j]) && !(p.upper[j] - p.lower[j] <= 0.0)) {
      if (!add(Term::constant(p.num_vars, p.lower[j]) - Term::variable(p.num_vars, j), false)) {
        out.status = SubStatus::Infeasible;
        return out;
      }
    }
    if (std::isfinite(p.upper[j]) && !(p.upper[j] - p.lower[j] <= 0.0)) {
      if (!add(Term::variable(p.num_vars, j) - p.upper[j], false)) {
        out.status = SubStatus::Infeasible;
        return out;
      }
    }
  }
  for (const auto& g : p.inequalities) {
    if (!add(g, false)) {
      out.status = SubStatus::Infeasible;
      return out;
    }
  }
  if (red.determined) {
    finish(red.base);
    out.status = SubStatus::Optimal;
    out.kkt_residual = 0.0;
    return out;
  }
  const size_t n_plain = b.cons.size();
  for (const auto& f : p.objective_terms) add(f, true);

  // Initial point.
  Vec v0(p.num_vars);
  for (Index j = 0; j < p.num_vars; ++j) {
    double lo = p.lower[j], hi = p.upper[j];
    if (std::isfinite(lo) && std::isfinite(hi))
      v0[j] = 0.5 * (lo + hi) + perturb * 0.25 * (hi - lo) * std::sin(1.0 + 7.0 * j);
    else if (std::isfinite(lo))
      v0[j] = lo + 1.0 + perturb;
    else if (std::isfinite(hi))
      v0[j] = hi - 1.0 - perturb;
    else
      v0[j] = perturb;
  }
  if (p.start && perturb == 0.0) v0 = *p.start;
  Vec z = Vec::Zero(dim);
  z.head(nu) = red.basis.transpose() * (v0 - red.base);
  if (has_obj) {
    double tmax = -kInf;
    for (size_t k = n_plain; k < b.cons.size(); ++k) {
      Vec z0 = z;
      z0[nu] = 0.0;
      tmax = std::max(tmax, b.cons[k].value(z0));
    }
    z[nu] = std::isfinite(tmax) ? tmax + 1.0 : 1.0;
  }

  int iters = 0;
  double worst = b.max_constraint(z);
  if (!std::isfinite(worst) && worst > 0) {
    out.status = SubStatus::NumericalFailure;
    return out;
  }
  if (!(worst < 0.0)) {
    // Phase 1: min s  s.t. F_k(z) - s <= 0, -1 - s <= 0.
    Barrier ph;
    ph.dim = dim + 1;
    ph.cost = Vec::Zero(ph.dim);
    ph.cost[dim] = 1.0;
    for (const auto& f : b.cons) ph.cons.push_back(f.embed(ph.dim) - Term::variable(ph.dim, dim));
    ph.cons.push_back(Term::constant(ph.dim, -1.0) - Term::variable(ph.dim, dim));
    // Without a cap the epigraph variable drifts to +inf along the phase-1 barrier.
    if (has_obj) ph.cons.push_back(Term::variable(ph.dim, nu) - (z[nu] + 1e6));
    Vec zs(ph.dim);
    zs.head(dim) = z;
    zs[dim] = worst + 1.0;
    auto early = [&](const Vec& w) { return b.max_constraint(w.head(dim)) < 0.0; };
    BarrierResult r = run_barrier(ph, zs, 1e-10, iters, early, -kInf);
    if (!(b.max_constraint(zs.head(dim)) < 0.0)) {
      out.iterations = iters;
      out.status = r.status == SubStatus::NumericalFailure ? r.status : SubStatus::Infeasible;
      return out;
    }
    z = zs.head(dim);
  }

  if (!has_obj) {
    out.status = SubStatus::Optimal;
    out.iterations = iters;
    finish(red.base + red.basis * z.head(nu));
    return out;
  }

  auto never = [](const Vec&) { return false; };
  BarrierResult r = run_barrier(b, z, tol, iters, never, -1e15);
  out.iterations = iters;
  out.status = r.status;
  if (r.status != SubStatus::Optimal) return out;
  finish(red.base + red.basis * z.head(nu));
  out.kkt_residual = r.gap;
  return out;
}

}  // namespace

SmoothConvexProgram::SmoothConvexProgram(Index n)
    : num_vars(n), a_eq(0, n), b_eq(0), lower(Vec::Constant(n, -kInf)),
      upper(Vec::Constant(n, kInf)) {}

void SmoothConvexProgram::check() const {
  if (lower.size() != num_vars || upper.size() != num_vars || a_eq.cols() != num_vars ||
      a_eq.rows() != b_eq.size())
    throw Error(ErrorCode::InvalidInput, "convex program dimensions are inconsistent");
  for (const auto& t : objective_terms)
    if (t.dim() != num_vars || !t.is_convex())
      throw Error(ErrorCode::InvalidInput, "objective term is not a convex term over the variables");
  for (const auto& t : inequalities)
    if (t.dim() != num_vars || !t.is_convex())
      throw Error(ErrorCode::InvalidInput, "inequality term is not a convex term over the variables");
  if (start && start->size() != num_vars)
    throw Error(ErrorCode::InvalidInput, "start point has the wrong dimension");
}

double barrier_value(const SmoothConvexProgram& p, const Vec& z, double tau, Vec* grad) {
  const Index n = p.num_vars;
  const bool has_obj = !p.objective_terms.empty();
  const Index dim = n + (has_obj ? 1 : 0);
  Barrier b;
  b.dim = dim;
  b.cost = Vec::Zero(dim);
  if (has_obj) b.cost[n] = 1.0;
  for (const auto& f : p.objective_terms) b.cons.push_back(f.embed(dim) - Term::variable(dim, n));
  for (const auto& g : p.inequalities) b.cons.push_back(g.embed(dim));
  for (Index j = 0; j < n; ++j) {
    if (std::isfinite(p.lower[j])) b.cons.push_back(Term::constant(dim, p.lower[j]) - Term::variable(dim, j));
    if (std::isfinite(p.upper[j])) b.cons.push_back(Term::variable(dim, j) - p.upper[j]);
  }
  return b.eval(z, tau, grad, nullptr);
}

SubSolution solve_convex(const SmoothConvexProgram& p, double tol) {
  p.check();
  SubSolution s = solve_once(p, tol, 0.0);
  if (s.status == SubStatus::NumericalFailure) {
    int iters = s.iterations;
    s = solve_once(p, tol, 0.3);
    s.iterations += iters;
  }
  return s;
}

}  // namespace sitopt
