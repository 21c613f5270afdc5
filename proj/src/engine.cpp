#include "sitopt/engine.hpp"

#include "sitopt/convex.hpp"
#include "sitopt/error.hpp"
#include "sitopt/fractional.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The problem with some variables frozen; everything else lives on the free
// variables u.
struct Reduced {
  std::vector<Index> map;
  Vec fixed;
  Index nfree = 0;
  Vec lower, upper;
  std::vector<LinearRow> rows;
  bool infeasible = false;

  Term restrict(const Term& t) const { return t.restrict(map, fixed, nfree); }

  Vec expand(const Vec& u) const {
    Vec v = fixed;
    for (Index j = 0; j < v.size(); ++j)
      if (map[j] >= 0) v[j] = u[map[j]];
    return v;
  }
};

Reduced reduce(const StructuredProblem& p, const Vec& lo, const Vec& hi) {
  const Index n = p.dim();
  Reduced r;
  r.map.assign(n, -1);
  r.fixed = Vec::Zero(n);
  std::vector<Index> free;
  for (Index j = 0; j < n; ++j) {
    if (hi[j] - lo[j] <= 0.0) {
      r.fixed[j] = lo[j];
      if (lo[j] > hi[j] + 1e-12) r.infeasible = true;
    } else {
      r.map[j] = static_cast<Index>(free.size());
      free.push_back(j);
    }
  }
  r.nfree = static_cast<Index>(free.size());
  r.lower.resize(r.nfree);
  r.upper.resize(r.nfree);
  for (Index k = 0; k < r.nfree; ++k) {
    r.lower[k] = lo[free[k]];
    r.upper[k] = hi[free[k]];
  }
  for (const auto& row : p.domain.rows) {
    LinearRow nr{Vec::Zero(r.nfree), row.b};
    bool any = false;
    for (Index j = 0; j < n; ++j) {
      if (row.a[j] == 0.0) continue;
      if (r.map[j] >= 0) {
        nr.a[r.map[j]] = row.a[j];
        any = true;
      } else {
        nr.b -= row.a[j] * r.fixed[j];
      }
    }
    if (any)
      r.rows.push_back(std::move(nr));
    else if (nr.b < -1e-9 * (1.0 + std::abs(row.b)))
      r.infeasible = true;
  }
  return r;
}

struct SubResult {
  SubStatus status = SubStatus::Infeasible;
  Vec v;  // full variable vector
  double value = 0.0;
};

bool all_affine(const std::vector<Term>& ts) {
  return std::all_of(ts.begin(), ts.end(), [](const Term& t) { return t.is_affine(); });
}

LinearProgram reduced_lp(const Reduced& r, const std::vector<Term>& ineq, Index extra) {
  const Index n = r.nfree + extra;
  LinearProgram lp(n);
  lp.lower.head(r.nfree) = r.lower;
  lp.upper.head(r.nfree) = r.upper;
  for (Index k = r.nfree; k < n; ++k) lp.lower[k] = -kInf;
  const Index m = static_cast<Index>(r.rows.size() + ineq.size());
  lp.a_ub = Mat::Zero(m, n);
  lp.b_ub.resize(m);
  Index i = 0;
  for (const auto& row : r.rows) {
    lp.a_ub.row(i).head(r.nfree) = row.a.transpose();
    lp.b_ub[i++] = row.b;
  }
  for (const auto& t : ineq) {
    lp.a_ub.row(i).head(r.nfree) = t.linear().coef.transpose();
    lp.b_ub[i++] = -t.linear().offset;
  }
  return lp;
}

SmoothConvexProgram reduced_nlp(const Reduced& r, const std::vector<Term>& ineq) {
  SmoothConvexProgram p(r.nfree);
  p.lower = r.lower;
  p.upper = r.upper;
  for (const auto& row : r.rows) p.inequalities.push_back(Term::affine(row.a, -row.b));
  for (const auto& t : ineq) p.inequalities.push_back(t);
  return p;
}

// min_u max_k obj_k(u)  s.t.  ineq(u) <= 0 and the reduced domain.
SubResult minimax(const Reduced& r, const std::vector<Term>& obj, const std::vector<Term>& ineq,
                  const SolverConfig& cfg, long& counter) {
  SubResult out;
  if (r.infeasible) return out;
  if (r.nfree == 0) {
    Vec u(0);
    for (const auto& t : ineq)
      if (!(t.value(u) <= 0.0)) return out;
    out.status = SubStatus::Optimal;
    out.v = r.expand(u);
    out.value = -kInf;
    for (const auto& t : obj) out.value = std::max(out.value, t.value(u));
    return out;
  }
  ++counter;
  SubSolution s;
  if (all_affine(obj) && all_affine(ineq)) {
    const Index extra = obj.empty() ? 0 : 1;
    LinearProgram lp = reduced_lp(r, ineq, extra);
    if (extra) {
      lp.cost[r.nfree] = 1.0;
      const Index base = lp.a_ub.rows();
      lp.a_ub.conservativeResize(base + static_cast<Index>(obj.size()), Eigen::NoChange);
      lp.b_ub.conservativeResize(base + static_cast<Index>(obj.size()));
      for (size_t k = 0; k < obj.size(); ++k) {
        lp.a_ub.row(base + k).head(r.nfree) = obj[k].linear().coef.transpose();
        lp.a_ub(base + k, r.nfree) = -1.0;
        lp.b_ub[base + k] = -obj[k].linear().offset;
      }
    }
    s = solve_lp(lp, cfg.lp_tol);
  } else {
    SmoothConvexProgram nlp = reduced_nlp(r, ineq);
    nlp.objective_terms = obj;
    s = solve_convex(nlp, cfg.nlp_tol);
  }
  out.status = s.status;
  if (!s.optimal()) return out;
  Vec u = s.point.head(r.nfree);
  out.v = r.expand(u);
  out.value = -kInf;
  for (const auto& t : obj) out.value = std::max(out.value, t.value(u));
  return out;
}

// max_u min_j num_j(u) / den_j(u)  s.t.  ineq(u) <= 0 and the reduced domain.
SubResult max_ratio(const Reduced& r, const std::vector<Term>& nums, const std::vector<Term>& dens,
                    const std::vector<Term>& ineq, const SolverConfig& cfg, long& counter) {
  SubResult out;
  if (r.infeasible) return out;
  auto ratio = [&](const Vec& u) {
    double v = kInf;
    for (size_t j = 0; j < nums.size(); ++j) v = std::min(v, nums[j].value(u) / dens[j].value(u));
    return v;
  };
  if (r.nfree == 0) {
    Vec u(0);
    for (const auto& t : ineq)
      if (!(t.value(u) <= 0.0)) return out;
    out.status = SubStatus::Optimal;
    out.v = r.expand(u);
    out.value = ratio(u);
    return out;
  }
  ++counter;
  SubSolution s;
  if (all_affine(nums) && all_affine(dens) && all_affine(ineq)) {
    std::vector<Affine> an, ad;
    for (const auto& t : nums) an.push_back(t.linear());
    for (const auto& t : dens) ad.push_back(t.linear());
    s = solve_min_ratio_lp(an, ad, reduced_lp(r, ineq, 0), cfg.lp_tol);
  } else {
    s = solve_min_ratio_convex(nums, dens, reduced_nlp(r, ineq), cfg.nlp_tol);
  }
  out.status = s.status;
  if (!s.optimal()) return out;
  Vec u = s.point.head(r.nfree);
  out.v = r.expand(u);
  out.value = ratio(u);
  return out;
}

}  // namespace

struct SitSolver::LinearForm {
  Index ng = 0, nx = 0;
  std::vector<Term> gx, gm;  // x-part of g-plus (offset included) and g-minus
  Mat a;                     // xi-coefficients of g-plus, one row per constraint
  std::vector<Term> numx, denx;
  Mat num_xi, den_xi;
  Mat rows_x, rows_xi;  // domain rows split into x- and xi-coefficients
  Vec rows_b;
  std::vector<bool> xi_row;  // false: the row constrains x only
  Vec lo, hi;                // xi bounds

  static std::shared_ptr<const LinearForm> build(const StructuredProblem& p) {
    if (p.n_nonglobal == 0) return nullptr;
    const Index n = p.dim();
    auto bad_dim = [n](const Term& t) { return t.dim() != n; };
    for (const auto& c : p.constraints)
      if (bad_dim(c.gplus) || bad_dim(c.gminus)) return nullptr;
    for (const auto& r : p.objective)
      if (bad_dim(r.num) || bad_dim(r.den)) return nullptr;
    if (p.domain.lower.size() != n || p.domain.upper.size() != n) return nullptr;
    for (const auto& row : p.domain.rows)
      if (row.a.size() != n) return nullptr;
    auto f = std::make_shared<LinearForm>();
    f->ng = p.n_global;
    f->nx = p.n_nonglobal;
    auto split = [&](const Term& t, std::vector<Term>& xs, Mat& coef, Index row) {
      auto [tx, txi] = split_separable(t, f->ng);
      if (!txi.is_affine()) return false;
      coef.row(row) = txi.linear().coef.tail(f->nx).transpose();
      xs.push_back(tx + txi.linear().offset);
      return true;
    };
    try {
      const Index m = static_cast<Index>(p.constraints.size()), k = static_cast<Index>(p.objective.size());
      f->a = Mat::Zero(m, f->nx);
      f->num_xi = Mat::Zero(k, f->nx);
      f->den_xi = Mat::Zero(k, f->nx);
      for (Index i = 0; i < m; ++i) {
        const auto& c = p.constraints[i];
        if (!split(c.gplus, f->gx, f->a, i) || c.gminus.depends_on_range(f->ng, p.dim())) return nullptr;
        f->gm.push_back(c.gminus);
      }
      for (Index j = 0; j < k; ++j)
        if (!split(p.objective[j].num, f->numx, f->num_xi, j) || !split(p.objective[j].den, f->denx, f->den_xi, j))
          return nullptr;
    } catch (const Error&) {
      return nullptr;
    }
    const Index nr = static_cast<Index>(p.domain.rows.size());
    f->rows_x.resize(nr, f->ng);
    f->rows_xi.resize(nr, f->nx);
    f->rows_b.resize(nr);
    for (Index i = 0; i < nr; ++i) {
      const auto& row = p.domain.rows[i];
      f->rows_x.row(i) = row.a.head(f->ng).transpose();
      f->rows_xi.row(i) = row.a.tail(f->nx).transpose();
      f->rows_b[i] = row.b;
      f->xi_row.push_back(!f->rows_xi.row(i).isZero(0.0));
    }
    f->lo = p.domain.lower.tail(f->nx);
    f->hi = p.domain.upper.tail(f->nx);
    return f;
  }

  // LP over (xi, extra free variables) holding the domain rows at fixed x plus
  // `more` zero rows for the caller; nullopt when an x-only row is violated.
  std::optional<LinearProgram> base_lp(const Vec& x, Index extra, Index more, Index& next) const {
    Index md = 0;
    for (bool b : xi_row) md += b;
    LinearProgram lp(nx + extra);
    lp.lower.head(nx) = lo;
    lp.upper.head(nx) = hi;
    for (Index k = nx; k < nx + extra; ++k) lp.lower[k] = -kInf;
    lp.a_ub = Mat::Zero(md + more, nx + extra);
    lp.b_ub.resize(md + more);
    next = 0;
    for (Index i = 0; i < rows_b.size(); ++i) {
      const double b = rows_b[i] - rows_x.row(i).dot(x);
      if (!xi_row[i]) {
        if (b < -1e-9 * (1.0 + std::abs(rows_b[i]))) return std::nullopt;
        continue;
      }
      lp.a_ub.row(next).head(nx) = rows_xi.row(i);
      lp.b_ub[next++] = b;
    }
    return lp;
  }

  // Bounding LP with x fixed at x (g-plus and objective) and g-minus taken at y:
  // min t  s.t.  gamma f- - f+ <= 0,  g+_i(x, xi) - g-_i(y) <= t.
  SubResult bound(const Vec& x, const Vec& y, double gamma, double tol) const {
    SubResult out;
    const Index m = a.rows(), k = num_xi.rows();
    Index r = 0;
    auto lp = base_lp(x.head(ng), 1, k + m, r);
    if (!lp) return out;
    lp->cost[nx] = 1.0;
    Vec c(m);
    for (Index j = 0; j < k; ++j, ++r) {
      lp->a_ub.row(r).head(nx) = gamma * den_xi.row(j) - num_xi.row(j);
      lp->b_ub[r] = numx[j].value(x) - gamma * denx[j].value(x);
    }
    for (Index i = 0; i < m; ++i, ++r) {
      c[i] = gx[i].value(x) - gm[i].value(y);
      lp->a_ub.row(r).head(nx) = a.row(i);
      lp->a_ub(r, nx) = -1.0;
      lp->b_ub[r] = -c[i];
    }
    SubSolution s = solve_lp(*lp, tol);
    out.status = s.status;
    if (!s.optimal()) return out;
    out.v = x;
    out.v.tail(nx) = s.point.head(nx);
    out.value = m ? (a * s.point.head(nx) + c).maxCoeff() : -kInf;
    return out;
  }

  // Domain rows plus g_i(x, xi) <= thr at fixed x.
  std::optional<LinearProgram> feasible_lp(const Vec& x, double thr) const {
    const Index m = a.rows();
    Index r = 0;
    auto lp = base_lp(x.head(ng), 0, m, r);
    if (!lp) return lp;
    for (Index i = 0; i < m; ++i, ++r) {
      lp->a_ub.row(r) = a.row(i);
      lp->b_ub[r] = thr - (gx[i].value(x) - gm[i].value(x));
    }
    return lp;
  }

  SubResult feasible_point(const Vec& x, double thr, double tol) const {
    SubResult out;
    auto lp = feasible_lp(x, thr);
    if (!lp) return out;
    SubSolution s = solve_lp(*lp, tol);
    out.status = s.status;
    if (!s.optimal()) return out;
    out.v = x;
    out.v.tail(nx) = s.point.head(nx);
    return out;
  }

  // max over xi of min_j f+_j / f-_j at fixed x, subject to g_i <= thr.
  SubResult best_ratio(const Vec& x, double thr, double tol) const {
    SubResult out;
    auto lp = feasible_lp(x, thr);
    if (!lp) return out;
    const Index k = num_xi.rows();
    std::vector<Affine> an, ad;
    an.reserve(k);
    ad.reserve(k);
    for (Index j = 0; j < k; ++j) {
      an.emplace_back(num_xi.row(j).transpose(), numx[j].value(x));
      ad.emplace_back(den_xi.row(j).transpose(), denx[j].value(x));
    }
    SubSolution s = solve_min_ratio_lp(an, ad, *lp, tol);
    out.status = s.status;
    if (!s.optimal()) return out;
    Vec xi = s.point.head(nx);
    out.v = x;
    out.v.tail(nx) = xi;
    out.value = kInf;
    for (Index j = 0; j < k; ++j) out.value = std::min(out.value, an[j](xi) / ad[j](xi));
    return out;
  }
};

void SolverConfig::check() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidInput, "eta must be positive");
  if (!(feas_tol > 0.0) || !(feas_tol < epsilon))
    throw Error(ErrorCode::InvalidInput, "feas_tol must lie in (0, epsilon)");
  if (!(lp_tol > 0.0) || !(nlp_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "solver tolerances must be positive");
  if (max_nodes <= 0) throw Error(ErrorCode::InvalidInput, "max_nodes must be positive");
}

Vec Incumbent::point() const {
  if (!x_bar) return Vec();
  Vec v(x_bar->size() + (xi_bar ? xi_bar->size() : 0));
  v.head(x_bar->size()) = *x_bar;
  if (xi_bar) v.tail(xi_bar->size()) = *xi_bar;
  return v;
}

bool offer(Incumbent& inc, const Vec& x, const Vec& xi, double value, double eta) {
  if (inc.set() && !(value > inc.gamma - eta)) return false;
  inc.x_bar = x;
  inc.xi_bar = xi;
  inc.value = value;
  inc.gamma = value + eta;
  return true;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::EssentialOptimal: return "EssentialOptimal";
    case SolveStatus::EssentialInfeasible: return "EssentialInfeasible";
    case SolveStatus::NodeBudgetExceeded: return "NodeBudgetExceeded";
  }
  return "Unknown";
}

const char* to_string(TraceAction a) {
  switch (a) {
    case TraceAction::Retain: return "retain";
    case TraceAction::Delete: return "delete";
    case TraceAction::IncumbentUpdate: return "incumbent-update";
  }
  return "unknown";
}

SitSolver::SitSolver(StructuredProblem problem, SolverConfig config)
    : problem_(std::move(problem)), linear_(LinearForm::build(problem_)), config_(config) {}

double SitSolver::starting_gamma() const {
  if (config_.gamma0) return *config_.gamma0;
  return problem_.gamma0.value_or(0.0);
}

Vec SitSolver::clamp_global(const Vec& x) const {
  const Index ng = problem_.n_global;
  return x.head(ng).cwiseMax(problem_.domain.lower.head(ng)).cwiseMin(problem_.domain.upper.head(ng));
}

BoundResult SitSolver::bound(const BoxRegion& box, double gamma) {
  const auto& p = problem_;
  const Index ng = p.n_global;
  BoundResult out;
  out.y_witness = common_maximizer(p.gminus_signature, box);
  Vec lo = p.domain.lower, hi = p.domain.upper;
  if (p.case_tag == CaseTag::B) {
    out.x_witness = common_minimizer(p.fx_signature, box);
    lo.head(ng) = out.x_witness;
    hi.head(ng) = out.x_witness;
  } else {
    lo.head(ng) = box.lower;
    hi.head(ng) = box.upper;
    out.x_witness = 0.5 * (box.lower + box.upper);
  }
  Vec yfull = Vec::Zero(p.dim());
  yfull.head(ng) = out.y_witness;

  SubResult s;
  if (p.case_tag == CaseTag::B && linear_) {
    Vec xfull = Vec::Zero(p.dim());
    xfull.head(ng) = out.x_witness;
    ++subproblems_;
    s = linear_->bound(xfull, yfull, gamma, config_.lp_tol);
  } else {
    Reduced r = reduce(p, lo, hi);
    std::vector<Term> obj, ineq;
    for (const auto& c : p.constraints) obj.push_back(r.restrict(c.gplus) - c.gminus.value(yfull));
    for (const auto& f : p.objective) ineq.push_back(r.restrict(gamma * f.den - f.num));
    s = minimax(r, obj, ineq, config_, subproblems_);
  }

  out.status = s.status;
  switch (s.status) {
    case SubStatus::Infeasible:
      out.beta = kInf;
      return out;
    case SubStatus::Unbounded:
      out.beta = -kInf;
      return out;
    case SubStatus::NumericalFailure:
      throw Error(ErrorCode::NumericalFailure, "bounding subproblem failed after retry");
    case SubStatus::Optimal:
      break;
  }
  out.beta = s.value;
  if (p.case_tag == CaseTag::A) out.x_witness = s.v.head(ng).cwiseMax(box.lower).cwiseMin(box.upper);
  out.xi_witness = s.v.tail(p.n_nonglobal);
  return out;
}

std::optional<SitSolver::Best> SitSolver::best_at(const Vec& x_in) {
  const auto& p = problem_;
  const Index ng = p.n_global;
  Vec x = clamp_global(x_in);
  const double thr = 0.5 * config_.feas_tol;
  SubResult s;
  if (linear_) {
    Vec xfull = Vec::Zero(p.dim());
    xfull.head(ng) = x;
    ++subproblems_;
    s = linear_->best_ratio(xfull, thr, config_.lp_tol);
  } else {
    Vec lo = p.domain.lower, hi = p.domain.upper;
    lo.head(ng) = x;
    hi.head(ng) = x;
    Reduced r = reduce(p, lo, hi);
    std::vector<Term> ineq, nums, dens;
    for (const auto& c : p.constraints) ineq.push_back(r.restrict(c.gplus - c.gminus) - thr);
    for (const auto& f : p.objective) {
      nums.push_back(r.restrict(f.num));
      dens.push_back(r.restrict(f.den));
    }
    s = max_ratio(r, nums, dens, ineq, config_, subproblems_);
  }
  if (s.status == SubStatus::NumericalFailure)
    throw Error(ErrorCode::NumericalFailure, "incumbent subproblem failed after retry");
  if (s.status != SubStatus::Optimal) return std::nullopt;
  if (!std::isfinite(s.value)) return std::nullopt;
  return Best{s.v.tail(p.n_nonglobal), s.value};
}

std::optional<Vec> SitSolver::check_feasibility(const Vec& x_in) {
  const auto& p = problem_;
  const Index ng = p.n_global;
  Vec x = clamp_global(x_in);
  const double thr = 0.5 * config_.feas_tol;
  SubResult s;
  if (linear_) {
    Vec xfull = Vec::Zero(p.dim());
    xfull.head(ng) = x;
    ++subproblems_;
    s = linear_->feasible_point(xfull, thr, config_.lp_tol);
  } else {
    Vec lo = p.domain.lower, hi = p.domain.upper;
    lo.head(ng) = x;
    hi.head(ng) = x;
    Reduced r = reduce(p, lo, hi);
    std::vector<Term> ineq;
    for (const auto& c : p.constraints) ineq.push_back(r.restrict(c.gplus - c.gminus) - thr);
    s = minimax(r, {}, ineq, config_, subproblems_);
  }
  if (s.status != SubStatus::Optimal) return std::nullopt;
  return Vec(s.v.tail(p.n_nonglobal));
}

Incumbent SitSolver::improve_incumbent(const Vec& x, const Incumbent& inc) {
  Incumbent out = inc;
  if (auto b = best_at(x)) offer(out, clamp_global(x), b->xi, b->value, config_.eta);
  return out;
}

SolveOutcome SitSolver::solve() {
  config_.check();
  ValidationReport rep = validate_problem(problem_, starting_gamma());
  if (!rep.ok()) {
    std::string msg = "problem violates its declared structure:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw Error(ErrorCode::InvalidInput, msg);
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  Incumbent& inc = out.incumbent;
  inc.gamma = starting_gamma();

  // Retained boxes live in a flat pool: lower, upper, x witness, y witness.
  const Index n = problem_.n_global;
  const std::size_t stride = 4 * static_cast<std::size_t>(n);
  std::vector<double> pool;
  std::vector<std::size_t> free_slots;
  std::size_t slots = 0;
  struct Entry {
    double beta;
    long seq;
    std::size_t slot;
  };
  auto later = [](const Entry& a, const Entry& b) {
    if (a.beta != b.beta) return a.beta > b.beta;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> active(later);
  std::vector<BoxRegion> pending{initial_box(problem_, config_.lp_tol)};
  long seq = 0;
  long k = 1;

  auto store = [&](const BoxRegion& b) {
    std::size_t slot;
    if (!free_slots.empty()) {
      slot = free_slots.back();
      free_slots.pop_back();
    } else {
      slot = slots++;
      pool.resize(slots * stride);
    }
    double* d = pool.data() + slot * stride;
    Eigen::Map<Vec>(d, n) = b.lower;
    Eigen::Map<Vec>(d + n, n) = b.upper;
    Eigen::Map<Vec>(d + 2 * n, n) = b.witness_x;
    Eigen::Map<Vec>(d + 3 * n, n) = b.witness_y;
    return slot;
  };
  auto load = [&](const Entry& e) {
    const double* d = pool.data() + e.slot * stride;
    BoxRegion b;
    b.lower = Eigen::Map<const Vec>(d, n);
    b.upper = Eigen::Map<const Vec>(d + n, n);
    b.witness_x = Eigen::Map<const Vec>(d + 2 * n, n);
    b.witness_y = Eigen::Map<const Vec>(d + 3 * n, n);
    b.beta = e.beta;
    free_slots.push_back(e.slot);
    return b;
  };

  auto emit = [&](const BoxRegion& b, TraceAction action) {
    if (!trace_) return;
    Vec point = action == TraceAction::IncumbentUpdate ? inc.point() : Vec();
    trace_({k, b.lower, b.upper, b.beta, action, inc.gamma, std::move(point)});
  };

  while (true) {
    for (auto& box : pending) {
      BoundResult br = bound(box, inc.gamma);
      box.beta = br.beta;
      box.witness_x = br.x_witness;
      box.witness_y = br.y_witness;
      if (box.beta <= -config_.epsilon) {
        emit(box, TraceAction::Retain);
        active.push({box.beta, seq++, store(box)});
      } else {
        emit(box, TraceAction::Delete);
      }
    }
    pending.clear();
    if (active.empty()) {
      out.status = inc.set() ? SolveStatus::EssentialOptimal : SolveStatus::EssentialInfeasible;
      break;
    }
    if (out.nodes_expanded >= config_.max_nodes) {
      out.status = SolveStatus::NodeBudgetExceeded;
      break;
    }
    BoxRegion box = load(active.top());
    active.pop();
    ++out.nodes_expanded;
    if (auto b = best_at(box.witness_x)) {
      if (offer(inc, clamp_global(box.witness_x), b->xi, b->value, config_.eta))
        emit(box, TraceAction::IncumbentUpdate);
    }
    // A single point is fully examined once its best ratio has been offered.
    if (!box.is_point()) {
      auto [lo, hi] = bisect(box, box.witness_x, box.witness_y);
      pending.push_back(std::move(lo));
      pending.push_back(std::move(hi));
    }
    ++k;
  }

  out.objective_value = inc.set() ? inc.value : std::numeric_limits<double>::quiet_NaN();
  out.subproblems_solved = subproblems_;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::pair<BoxRegion, BoxRegion> bisect(const BoxRegion& box, const Vec& x_in, const Vec& y_in) {
  const Index n = box.dim();
  if (box.is_point()) throw Error(ErrorCode::ZeroVolumeBox, "cannot bisect a box with zero volume");
  if (x_in.size() != n || y_in.size() != n) throw Error(ErrorCode::InvalidInput, "witness dimension mismatch");
  Vec x = x_in.cwiseMax(box.lower).cwiseMin(box.upper);
  Vec y = y_in.cwiseMax(box.lower).cwiseMin(box.upper);
  Index j = -1;
  double best = 0.0;
  for (Index i = 0; i < n; ++i) {
    double d = std::abs(y[i] - x[i]);
    if (d > best) {
      best = d;
      j = i;
    }
  }
  const double widest = box.max_width();
  double v;
  if (j < 0 || best <= 1e-12 * (1.0 + widest)) {
    j = 0;
    for (Index i = 1; i < n; ++i)
      if (box.upper[i] - box.lower[i] > box.upper[j] - box.lower[j]) j = i;
    v = 0.5 * (box.lower[j] + box.upper[j]);
  } else {
    v = 0.5 * (x[j] + y[j]);
  }
  BoxRegion minus, plus;
  minus.lower = box.lower;
  minus.upper = box.upper;
  minus.upper[j] = v;
  plus.lower = box.lower;
  plus.upper = box.upper;
  plus.lower[j] = v;
  return {std::move(minus), std::move(plus)};
}

BoundResult bound(const StructuredProblem& p, const BoxRegion& box, double gamma, const SolverConfig& cfg) {
  SitSolver s(p, cfg);
  return s.bound(box, gamma);
}

std::optional<Vec> check_feasibility(const StructuredProblem& p, const Vec& x, const SolverConfig& cfg) {
  SitSolver s(p, cfg);
  return s.check_feasibility(x);
}

Incumbent improve_incumbent(const StructuredProblem& p, const Vec& x, const Incumbent& inc,
                            const SolverConfig& cfg) {
  SitSolver s(p, cfg);
  return s.improve_incumbent(x, inc);
}

SolveOutcome solve(const StructuredProblem& p, const SolverConfig& cfg, TraceSink trace) {
  SitSolver s(p, cfg);
  s.set_trace(std::move(trace));
  return s.solve();
}

}  // namespace sitopt
