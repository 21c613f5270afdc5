#include "sitopt/problem.hpp"

#include "sitopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool consistent(Monotonicity m, int s) {
  switch (m) {
    case Monotonicity::Constant: return true;
    case Monotonicity::Increasing: return s > 0;
    case Monotonicity::Decreasing: return s < 0;
    case Monotonicity::Mixed: return false;
  }
  return false;
}

bool mixes(const Affine& a, Index n_global) {
  bool gx = false, gxi = false;
  for (Index j = 0; j < a.dim(); ++j) {
    if (a.coef[j] == 0.0) continue;
    (j < n_global ? gx : gxi) = true;
  }
  return gx && gxi;
}

bool is_separable(const Term& t, Index n_global) {
  for (const auto& leaf : t.logs())
    if (mixes(leaf.arg, n_global)) return false;
  return true;
}

std::string label(const char* what, size_t i) {
  std::ostringstream os;
  os << what << ' ' << i;
  return os.str();
}

}  // namespace

const char* to_string(CaseTag c) { return c == CaseTag::A ? "A" : "B"; }
const char* to_string(Identification id) { return id == Identification::Tight ? "tight" : "separable"; }

double StructuredProblem::constraint(size_t i, const Vec& v) const {
  return constraints[i].gplus.value(v) - constraints[i].gminus.value(v);
}

double StructuredProblem::max_constraint(const Vec& v) const {
  double m = -kInf;
  for (size_t i = 0; i < constraints.size(); ++i) m = std::max(m, constraint(i, v));
  return m;
}

double StructuredProblem::ratio(const Vec& v) const {
  double r = kInf;
  for (const auto& pair : objective) {
    double den = pair.den.value(v);
    if (!(den > 0.0)) throw Error(ErrorCode::InvalidInput, "objective denominator is not positive");
    r = std::min(r, pair.num.value(v) / den);
  }
  return r;
}

double StructuredProblem::domain_violation(const Vec& v) const {
  double viol = 0.0;
  for (Index j = 0; j < v.size(); ++j) {
    viol = std::max(viol, domain.lower[j] - v[j]);
    viol = std::max(viol, v[j] - domain.upper[j]);
  }
  for (const auto& row : domain.rows) viol = std::max(viol, row.a.dot(v) - row.b);
  return viol;
}

bool ValidationReport::mentions(const std::string& needle) const {
  for (const auto& v : violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

LinearProgram domain_lp(const StructuredProblem& p) {
  LinearProgram lp(p.dim());
  lp.lower = p.domain.lower;
  lp.upper = p.domain.upper;
  for (const auto& row : p.domain.rows) lp.add_le(row.a, row.b);
  return lp;
}

ValidationReport validate_problem(const StructuredProblem& p, std::optional<double> gamma0) {
  ValidationReport rep;
  auto& out = rep.violations;
  const Index n = p.dim();
  const Index ng = p.n_global;
  const double gmin = gamma0 ? *gamma0 : p.gamma0.value_or(0.0);

  // Structure first; later checks assume consistent dimensions.
  if (p.n_global < 0 || p.n_nonglobal < 0) out.push_back("negative variable count");
  if (p.objective.empty()) out.push_back("objective has no ratio pair");
  auto check_dim = [&](const Term& t, const std::string& what) {
    if (t.dim() != n) out.push_back(what + ": term dimension does not match the variable count");
  };
  for (size_t j = 0; j < p.objective.size(); ++j) {
    check_dim(p.objective[j].num, label("objective numerator", j));
    check_dim(p.objective[j].den, label("objective denominator", j));
  }
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    check_dim(p.constraints[i].gplus, label("constraint g-plus", i));
    check_dim(p.constraints[i].gminus, label("constraint g-minus", i));
  }
  if (static_cast<Index>(p.gminus_signature.size()) != ng)
    out.push_back("g-minus signature length differs from the number of global variables");
  if (p.case_tag == CaseTag::B && static_cast<Index>(p.fx_signature.size()) != ng)
    out.push_back("fx signature length differs from the number of global variables");
  for (int s : p.gminus_signature)
    if (s != 1 && s != -1) out.push_back("signature entries must be +1 or -1");
  for (int s : p.fx_signature)
    if (s != 1 && s != -1) out.push_back("signature entries must be +1 or -1");
  if (p.domain.lower.size() != n || p.domain.upper.size() != n)
    out.push_back("domain bounds do not match the variable count");
  for (const auto& row : p.domain.rows)
    if (row.a.size() != n) out.push_back("domain row does not match the variable count");
  if (!out.empty()) return rep;

  // g-minus: function of x only, monotone along the declared signature.
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const Term& gm = p.constraints[i].gminus;
    if (gm.depends_on_range(ng, n))
      out.push_back(label("constraint", i) + ": g-minus depends on non-global variable");
    for (Index j = 0; j < ng; ++j)
      if (!consistent(gm.monotonicity(j), p.gminus_signature[j]))
        out.push_back(label("constraint", i) + ": g-minus is not monotone along the signature in x" +
                      std::to_string(j));
  }

  // Effective box: domain bounds, tightened by LP where infinite.
  Vec lo = p.domain.lower, hi = p.domain.upper;
  if (!p.domain.rows.empty()) {
    LinearProgram lp = domain_lp(p);
    for (Index j = 0; j < n; ++j) {
      if (std::isfinite(lo[j]) && std::isfinite(hi[j])) continue;
      for (int dir : {1, -1}) {
        if (dir > 0 ? std::isfinite(lo[j]) : std::isfinite(hi[j])) continue;
        lp.cost.setZero();
        lp.cost[j] = dir;
        auto s = solve_lp(lp);
        if (s.optimal()) (dir > 0 ? lo[j] : hi[j]) = s.point[j];
      }
    }
  }
  for (Index j = 0; j < ng; ++j)
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]))
      out.push_back("domain is unbounded in global variable x" + std::to_string(j));

  auto check_logs = [&](const Term& t, const std::string& what) {
    for (const auto& leaf : t.logs())
      if (!(leaf.arg.min_over(lo, hi) > 0.0)) {
        out.push_back(what + ": log2 argument may be non-positive on the domain box");
        return;
      }
  };
  for (size_t j = 0; j < p.objective.size(); ++j) {
    check_logs(p.objective[j].num, label("objective numerator", j));
    check_logs(p.objective[j].den, label("objective denominator", j));
    if (!(p.objective[j].den.range(lo, hi).lo > 0.0))
      out.push_back(label("objective denominator", j) + ": may be non-positive on the domain box");
  }
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    check_logs(p.constraints[i].gplus, label("constraint g-plus", i));
    check_logs(p.constraints[i].gminus, label("constraint g-minus", i));
  }

  auto den_ok = [&](const Term& den) { return den.is_affine() || (den.is_convex() && gmin >= 0.0); };

  if (p.case_tag == CaseTag::A) {
    for (size_t i = 0; i < p.constraints.size(); ++i)
      if (!p.constraints[i].gplus.is_convex())
        out.push_back(label("constraint", i) + ": Case A requires a convex g-plus");
    for (size_t j = 0; j < p.objective.size(); ++j) {
      if (!p.objective[j].num.is_concave())
        out.push_back(label("objective", j) + ": Case A requires a concave numerator");
      if (!den_ok(p.objective[j].den))
        out.push_back(label("objective", j) +
                      ": Case A requires an affine denominator, or a convex one with gamma0 >= 0");
    }
    return rep;
  }

  // Case B: separable terms, box-shaped global domain, convex xi-parts,
  // monotone x-parts along fx_signature.
  auto separable = [&](const Term& t, const std::string& what) {
    if (!is_separable(t, ng)) {
      out.push_back(what + ": non-separable term");
      return false;
    }
    return true;
  };
  for (const auto& row : p.domain.rows) {
    bool gx = ng > 0 && row.a.head(ng).cwiseAbs().maxCoeff() > 0.0;
    bool gxi = n > ng && row.a.tail(n - ng).cwiseAbs().maxCoeff() > 0.0;
    if (gx && gxi) out.push_back("domain row couples global and non-global variables");
    else if (gx) out.push_back("Case B requires the global part of the domain to be a box");
  }
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const Term& gp = p.constraints[i].gplus;
    if (!separable(gp, label("constraint g-plus", i))) continue;
    separable(p.constraints[i].gminus, label("constraint g-minus", i));
    auto [gx, gxi] = split_separable(gp, ng);
    if (!gxi.is_convex()) out.push_back(label("constraint", i) + ": non-global part of g-plus is not convex");
    for (Index j = 0; j < ng; ++j)
      if (!consistent(gx.monotonicity(j), p.fx_signature[j]))
        out.push_back(label("constraint", i) + ": g-plus is not monotone along fx signature in x" +
                      std::to_string(j));
  }
  for (size_t k = 0; k < p.objective.size(); ++k) {
    const auto& pair = p.objective[k];
    bool ok_num = separable(pair.num, label("objective numerator", k));
    bool ok_den = separable(pair.den, label("objective denominator", k));
    if (!ok_num || !ok_den) continue;
    auto [nx, nxi] = split_separable(pair.num, ng);
    auto [dx, dxi] = split_separable(pair.den, ng);
    if (!nxi.is_concave()) out.push_back(label("objective", k) + ": non-global part of numerator is not concave");
    if (!den_ok(dxi))
      out.push_back(label("objective", k) + ": non-global part of denominator must be affine, or convex with gamma0 >= 0");
    for (Index j = 0; j < ng; ++j) {
      int s = p.fx_signature[j];
      bool ok = consistent((-nx).monotonicity(j), s);
      Monotonicity dm = dx.monotonicity(j);
      if (gmin >= 0.0)
        ok = ok && consistent(dm, s);
      else
        ok = ok && dm == Monotonicity::Constant;
      if (!ok)
        out.push_back(label("objective", k) + ": gamma f-minus - f-plus is not monotone along fx signature in x" +
                      std::to_string(j));
    }
  }
  return rep;
}

bool BoxRegion::contains(const Vec& x, double tol) const {
  for (Index j = 0; j < lower.size(); ++j)
    if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
  return true;
}

double BoxRegion::max_width() const {
  return lower.size() ? (upper - lower).maxCoeff() : 0.0;
}

BoxRegion initial_box(const StructuredProblem& p, double lp_tol) {
  const Index ng = p.n_global;
  BoxRegion box;
  box.lower = p.domain.lower.head(ng);
  box.upper = p.domain.upper.head(ng);
  LinearProgram lp = domain_lp(p);
  bool need_lp = !p.domain.rows.empty();
  if (!need_lp) {
    // Still confirm C is nonempty in the non-global bounds.
    for (Index j = 0; j < p.dim(); ++j)
      if (p.domain.lower[j] > p.domain.upper[j]) throw Error(ErrorCode::EmptyDomain, "domain bounds cross");
  }
  for (Index j = 0; j < ng; ++j) {
    for (int dir : {1, -1}) {
      double value;
      if (need_lp) {
        lp.cost.setZero();
        lp.cost[j] = dir;
        auto s = solve_lp(lp, lp_tol);
        if (s.status == SubStatus::Infeasible) throw Error(ErrorCode::EmptyDomain, "domain is empty");
        if (s.status == SubStatus::Unbounded)
          throw Error(ErrorCode::UnboundedDomain, "domain is unbounded in x" + std::to_string(j));
        if (!s.optimal()) throw Error(ErrorCode::NumericalFailure, "initial box LP failed");
        value = s.point[j];
      } else {
        value = dir > 0 ? p.domain.lower[j] : p.domain.upper[j];
        if (!std::isfinite(value))
          throw Error(ErrorCode::UnboundedDomain, "domain is unbounded in x" + std::to_string(j));
      }
      (dir > 0 ? box.lower[j] : box.upper[j]) = value;
    }
  }
  if (need_lp && ng == 0) {
    auto s = solve_lp(lp, lp_tol);
    if (s.status == SubStatus::Infeasible) throw Error(ErrorCode::EmptyDomain, "domain is empty");
  }
  box.upper = box.upper.cwiseMax(box.lower);
  box.witness_x = box.lower;
  box.witness_y = box.upper;
  return box;
}

Vec common_maximizer(const std::vector<int>& signature, const BoxRegion& box) {
  if (static_cast<Index>(signature.size()) != box.dim())
    throw Error(ErrorCode::InvalidInput, "signature length differs from box dimension");
  Vec c(box.dim());
  for (Index j = 0; j < box.dim(); ++j) c[j] = signature[j] > 0 ? box.upper[j] : box.lower[j];
  return c;
}

Vec common_minimizer(const std::vector<int>& signature, const BoxRegion& box) {
  if (static_cast<Index>(signature.size()) != box.dim())
    throw Error(ErrorCode::InvalidInput, "signature length differs from box dimension");
  Vec c(box.dim());
  for (Index j = 0; j < box.dim(); ++j) c[j] = signature[j] > 0 ? box.lower[j] : box.upper[j];
  return c;
}

std::pair<Term, Term> split_separable(const Term& t, Index n_global) {
  const Index n = t.dim();
  Vec cx = Vec::Zero(n), cxi = Vec::Zero(n);
  cx.head(n_global) = t.linear().coef.head(n_global);
  cxi.tail(n - n_global) = t.linear().coef.tail(n - n_global);
  Term x = Term::affine(cx, t.linear().offset);
  Term xi = Term::affine(cxi, 0.0);
  for (const auto& leaf : t.logs()) {
    if (mixes(leaf.arg, n_global)) throw Error(ErrorCode::InvalidInput, "non-separable term");
    bool on_x = leaf.arg.coef.head(n_global).cwiseAbs().sum() > 0.0;
    Term l = leaf.weight * Term::log2(leaf.arg);
    (on_x ? x : xi) += l;
  }
  return {x, xi};
}

}  // namespace sitopt
