#include "sitopt/lp.hpp"

#include "sitopt/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sitopt {

const char* to_string(SubStatus s) {
  switch (s) {
    case SubStatus::Optimal: return "Optimal";
    case SubStatus::Infeasible: return "Infeasible";
    case SubStatus::Unbounded: return "Unbounded";
    case SubStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_row(Mat& a, Vec& b, const Vec& row, double rhs) {
  Index r = a.rows();
  Mat na(r + 1, row.size());
  if (r > 0) na.topRows(r) = a;
  na.row(r) = row.transpose();
  a.swap(na);
  b.conservativeResize(r + 1);
  b[r] = rhs;
}

// How an original variable maps onto the nonnegative standard-form columns.
struct VarMap {
  enum Kind { Fixed, Shift, Mirror, Free } kind;
  double anchor;  // fixed value, lower bound or upper bound
  Index col;      // first standard column
};

struct StdRow {
  Vec a;        // coefficients over structural columns
  double b;
  bool is_le;   // gets a slack
  int origin;   // index into ub rows, eq rows, or -1 for synthetic bound rows
  bool origin_eq;
};

class Simplex {
 public:
  Simplex(Mat a, Vec b, std::vector<int> basis, Index n_struct, Index n_art, double tol)
      : m_(a.rows()), n_(a.cols()), n_struct_(n_struct), n_art_(n_art), tol_(tol),
        basis_(std::move(basis)) {
    t_ = Mat::Zero(m_ + 1, n_ + 1);
    t_.topLeftCorner(m_, n_) = a;
    t_.topRightCorner(m_, 1) = b;
    limit_ = 50 * static_cast<int>(m_ + n_) + 1000;
    nz_rows_.reserve(m_ + 1);
    nz_cols_.reserve(n_ + 1);
  }

  // Phase runner. Returns Optimal, Unbounded or NumericalFailure.
  SubStatus run(const Vec& cost, bool allow_art) {
    t_.row(m_).setZero();
    t_.block(m_, 0, 1, cost.size()) = cost.transpose();
    for (Index i = 0; i < m_; ++i) {
      double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
    Index allowed = allow_art ? n_ : n_ - n_art_;
    bool bland = false;
    int degenerate_run = 0;
    const int degenerate_limit = 2 * static_cast<int>(m_ + n_);
    double dtol = tol_ * std::max(1.0, cost.size() ? cost.cwiseAbs().maxCoeff() : 1.0);
    while (true) {
      if (iterations_ >= limit_) return SubStatus::NumericalFailure;
      Index enter = -1;
      double best = -dtol;
      for (Index j = 0; j < allowed; ++j) {
        double d = t_(m_, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return SubStatus::Optimal;
      Index leave = -1;
      double best_ratio = kInf;
      double best_piv = 0.0;
      for (Index i = 0; i < m_; ++i) {
        double piv = t_(i, enter);
        if (piv <= kPivTol) continue;
        double ratio = std::max(0.0, t_(i, n_)) / piv;
        double slack = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
        bool better;
        if (leave < 0 || ratio < best_ratio - slack) {
          better = true;
        } else if (ratio <= best_ratio + slack) {
          better = bland ? basis_[i] < basis_[leave] : piv > best_piv;
        } else {
          better = false;
        }
        if (better) {
          leave = i;
          best_ratio = ratio;
          best_piv = piv;
        }
      }
      if (leave < 0) return SubStatus::Unbounded;
      if (best_ratio <= 1e-12) {
        if (++degenerate_run >= degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, enter);
    }
  }

  // Rank-one update restricted to the nonzeros of the pivot row and column;
  // tableaus of the bounding LPs stay sparse.
  void pivot(Index r, Index e) {
    ++iterations_;
    t_.row(r) /= t_(r, e);
    nz_rows_.clear();
    nz_cols_.clear();
    for (Index i = 0; i <= m_; ++i)
      if (i != r && t_(i, e) != 0.0) nz_rows_.push_back(i);
    for (Index j = 0; j <= n_; ++j)
      if (t_(r, j) != 0.0) nz_cols_.push_back(j);
    for (Index j : nz_cols_) {
      if (j == e) continue;
      const double pj = t_(r, j);
      double* colj = &t_.coeffRef(0, j);
      const double* cole = &t_.coeffRef(0, e);
      for (Index i : nz_rows_) colj[i] -= cole[i] * pj;
    }
    for (Index i : nz_rows_) t_(i, e) = 0.0;
    t_(r, e) = 1.0;
    basis_[r] = static_cast<int>(e);
  }

  double phase_value() const { return -t_(m_, n_); }

  // Pivots basic artificials out; rows where that is impossible are redundant
  // and get dropped. Afterwards artificial columns are removed.
  std::vector<Index> drive_out_artificials() {
    std::vector<Index> keep;
    keep.reserve(m_);
    Index first_art = n_ - n_art_;
    for (Index i = 0; i < m_; ++i) {
      if (basis_[i] < first_art) {
        keep.push_back(i);
        continue;
      }
      Index best = -1;
      double mag = 1e-7;
      for (Index j = 0; j < first_art; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
        keep.push_back(i);
      }
    }
    Mat nt(keep.size() + 1, first_art + 1);
    std::vector<int> nb;
    nb.reserve(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
      nt.row(k).head(first_art) = t_.row(keep[k]).head(first_art);
      nt(k, first_art) = t_(keep[k], n_);
      nb.push_back(basis_[keep[k]]);
    }
    nt.row(keep.size()).setZero();
    t_.swap(nt);
    basis_ = std::move(nb);
    m_ = static_cast<Index>(keep.size());
    n_ = first_art;
    n_art_ = 0;
    return keep;
  }

  const std::vector<int>& basis() const { return basis_; }
  Vec rhs() const { return t_.col(n_).head(m_); }
  double reduced_cost(Index j) const { return t_(m_, j); }
  int iterations() const { return iterations_; }

 private:
  static constexpr double kPivTol = 1e-10;
  Index m_, n_, n_struct_, n_art_;
  double tol_;
  Mat t_;
  std::vector<int> basis_;
  std::vector<Index> nz_rows_, nz_cols_;
  int iterations_ = 0;
  int limit_;
};

}  // namespace

LinearProgram::LinearProgram(Index n)
    : cost(Vec::Zero(n)), a_ub(0, n), b_ub(0), a_eq(0, n), b_eq(0),
      lower(Vec::Zero(n)), upper(Vec::Constant(n, kInf)) {}

void LinearProgram::add_le(const Vec& a, double b) { append_row(a_ub, b_ub, a, b); }
void LinearProgram::add_eq(const Vec& a, double b) { append_row(a_eq, b_eq, a, b); }

double LinearProgram::violation(const Vec& x) const {
  double v = 0.0;
  if (a_ub.rows()) v = std::max(v, (a_ub * x - b_ub).maxCoeff());
  if (a_eq.rows()) v = std::max(v, (a_eq * x - b_eq).cwiseAbs().maxCoeff());
  for (Index j = 0; j < x.size(); ++j) {
    v = std::max(v, lower[j] - x[j]);
    v = std::max(v, x[j] - upper[j]);
  }
  return v;
}

void LinearProgram::check() const {
  Index n = cost.size();
  if (lower.size() != n || upper.size() != n || a_ub.cols() != n || a_eq.cols() != n ||
      a_ub.rows() != b_ub.size() || a_eq.rows() != b_eq.size())
    throw Error(ErrorCode::InvalidInput, "linear program dimensions are inconsistent");
  if (!cost.allFinite() || !a_ub.allFinite() || !b_ub.allFinite() || !a_eq.allFinite() ||
      !b_eq.allFinite())
    throw Error(ErrorCode::InvalidInput, "linear program data must be finite");
}

SubSolution solve_lp(const LinearProgram& lp, double tol) {
  lp.check();
  const Index n = lp.num_vars();
  SubSolution out;

  for (Index j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j] + tol) {
      out.status = SubStatus::Infeasible;
      return out;
    }
  }

  // Variable substitution onto nonnegative columns.
  std::vector<VarMap> vars(n);
  std::vector<StdRow> rows;
  rows.reserve(lp.a_ub.rows() + lp.a_eq.rows() + n);
  Index ns = 0;
  std::vector<std::pair<Index, double>> bound_rows;
  for (Index j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 0.0) {
      vars[j] = {VarMap::Fixed, lo, -1};
    } else if (std::isfinite(lo)) {
      vars[j] = {VarMap::Shift, lo, ns++};
      if (std::isfinite(hi)) bound_rows.emplace_back(vars[j].col, hi - lo);
    } else if (std::isfinite(hi)) {
      vars[j] = {VarMap::Mirror, hi, ns++};
    } else {
      vars[j] = {VarMap::Free, 0.0, ns};
      ns += 2;
    }
  }

  auto transform = [&](const auto& a, double b, StdRow& row) {
    row.a = Vec::Zero(ns);
    row.b = b;
    for (Index j = 0; j < n; ++j) {
      double c = a[j];
      if (c == 0.0) continue;
      const auto& v = vars[j];
      switch (v.kind) {
        case VarMap::Fixed: row.b -= c * v.anchor; break;
        case VarMap::Shift: row.b -= c * v.anchor; row.a[v.col] += c; break;
        case VarMap::Mirror: row.b -= c * v.anchor; row.a[v.col] -= c; break;
        case VarMap::Free: row.a[v.col] += c; row.a[v.col + 1] -= c; break;
      }
    }
  };

  for (Index i = 0; i < lp.a_ub.rows(); ++i) {
    StdRow r;
    transform(lp.a_ub.row(i), lp.b_ub[i], r);
    r.is_le = true;
    r.origin = static_cast<int>(i);
    r.origin_eq = false;
    rows.push_back(std::move(r));
  }
  for (Index i = 0; i < lp.a_eq.rows(); ++i) {
    StdRow r;
    transform(lp.a_eq.row(i), lp.b_eq[i], r);
    r.is_le = false;
    r.origin = static_cast<int>(i);
    r.origin_eq = true;
    rows.push_back(std::move(r));
  }
  for (auto [col, width] : bound_rows) {
    StdRow r;
    r.a = Vec::Zero(ns);
    r.a[col] = 1.0;
    r.b = width;
    r.is_le = true;
    r.origin = -1;
    r.origin_eq = false;
    rows.push_back(std::move(r));
  }

  Vec cstd = Vec::Zero(ns);
  for (Index j = 0; j < n; ++j) {
    const auto& v = vars[j];
    double c = lp.cost[j];
    switch (v.kind) {
      case VarMap::Fixed: break;
      case VarMap::Shift: cstd[v.col] += c; break;
      case VarMap::Mirror: cstd[v.col] -= c; break;
      case VarMap::Free: cstd[v.col] += c; cstd[v.col + 1] -= c; break;
    }
  }

  auto recover = [&](const Vec& xs) {
    Vec x(n);
    for (Index j = 0; j < n; ++j) {
      const auto& v = vars[j];
      switch (v.kind) {
        case VarMap::Fixed: x[j] = v.anchor; break;
        case VarMap::Shift: x[j] = v.anchor + xs[v.col]; break;
        case VarMap::Mirror: x[j] = v.anchor - xs[v.col]; break;
        case VarMap::Free: x[j] = xs[v.col] - xs[v.col + 1]; break;
      }
    }
    return x;
  };

  const Index m = static_cast<Index>(rows.size());
  Index n_slack = 0;
  for (const auto& r : rows) n_slack += r.is_le ? 1 : 0;
  std::vector<double> sigma(m, 1.0);
  Index n_art = 0;
  for (Index i = 0; i < m; ++i) {
    if (rows[i].b < 0) sigma[i] = -1.0;
    if (!rows[i].is_le || sigma[i] < 0) ++n_art;
  }

  const Index ncols = ns + n_slack + n_art;
  Mat a = Mat::Zero(m, ncols);
  Vec b(m);
  std::vector<int> basis(m);
  Index slack_col = ns, art_col = ns + n_slack;
  for (Index i = 0; i < m; ++i) {
    a.row(i).head(ns) = sigma[i] * rows[i].a.transpose();
    b[i] = sigma[i] * rows[i].b;
    if (rows[i].is_le) {
      a(i, slack_col) = sigma[i];
      if (sigma[i] > 0) basis[i] = static_cast<int>(slack_col);
      ++slack_col;
    }
    if (!rows[i].is_le || sigma[i] < 0) {
      a(i, art_col) = 1.0;
      basis[i] = static_cast<int>(art_col);
      ++art_col;
    }
  }
  const Mat a_std = a.leftCols(ns + n_slack);
  double bscale = 1.0 + (m ? b.cwiseAbs().maxCoeff() : 0.0);

  Simplex sx(std::move(a), b, basis, ns, n_art, tol);
  if (n_art > 0) {
    Vec c1 = Vec::Zero(ncols);
    c1.tail(n_art).setOnes();
    SubStatus s1 = sx.run(c1, true);
    out.iterations = sx.iterations();
    if (s1 == SubStatus::NumericalFailure) {
      out.status = s1;
      return out;
    }
    if (sx.phase_value() > 10.0 * tol * bscale) {
      out.status = SubStatus::Infeasible;
      return out;
    }
  }
  std::vector<Index> kept = sx.drive_out_artificials();
  Vec c2 = Vec::Zero(ns + n_slack);
  c2.head(ns) = cstd;
  SubStatus s2 = sx.run(c2, false);
  out.iterations = sx.iterations();
  if (s2 != SubStatus::Optimal) {
    out.status = s2;
    return out;
  }

  // Basic solution and row multipliers straight from the tableau; the basis
  // matrix is factorized only when the tableau has drifted or an equality row
  // has no slack column to read its multiplier from.
  const auto& bas = sx.basis();
  const Index mk = static_cast<Index>(kept.size());
  Vec xs_full = Vec::Zero(ns + n_slack);
  Vec y_std = Vec::Zero(m);
  if (mk > 0) {
    Vec rhs = sx.rhs();
    for (Index k = 0; k < mk; ++k) xs_full[bas[k]] = std::max(0.0, rhs[k]);
    double resid = 0.0;
    for (Index r = 0; r < mk; ++r) resid = std::max(resid, std::abs(a_std.row(kept[r]).dot(xs_full) - b[kept[r]]));
    std::vector<Index> slack_of(m, -1);
    for (Index i = 0, s = ns; i < m; ++i)
      if (rows[i].is_le) slack_of[i] = s++;
    bool all_slack = true;
    for (Index r = 0; r < mk; ++r) all_slack = all_slack && slack_of[kept[r]] >= 0;

    if (resid > 1e-9 * bscale || !all_slack) {
      Mat brows(mk, mk);
      Vec bk(mk), cb(mk);
      for (Index k = 0; k < mk; ++k) cb[k] = c2[bas[k]];
      for (Index r = 0; r < mk; ++r) {
        for (Index k = 0; k < mk; ++k) brows(r, k) = a_std(kept[r], bas[k]);
        bk[r] = b[kept[r]];
      }
      Eigen::PartialPivLU<Mat> lu(brows);
      if (resid > 1e-9 * bscale) {
        Vec xb = lu.solve(bk);
        if (xb.allFinite() && (xb - rhs).cwiseAbs().maxCoeff() <= 1e-6 * bscale) {
          xs_full.setZero();
          for (Index k = 0; k < mk; ++k) xs_full[bas[k]] = std::max(0.0, xb[k]);
        }
      }
      Vec yk = lu.transpose().solve(cb);
      if (yk.allFinite())
        for (Index r = 0; r < mk; ++r) y_std[kept[r]] = yk[r];
    } else {
      // Slack column of row i is sigma_i e_i with zero cost: d = -sigma_i y_i.
      for (Index r = 0; r < mk; ++r) {
        const Index i = kept[r];
        y_std[i] = -sx.reduced_cost(slack_of[i]) / sigma[i];
      }
    }
  }

  out.status = SubStatus::Optimal;
  out.point = recover(xs_full.head(ns));
  out.objective = lp.cost.dot(out.point);
  out.duals_ub = Vec::Zero(lp.a_ub.rows());
  out.duals_eq = Vec::Zero(lp.a_eq.rows());
  for (Index i = 0; i < m; ++i) {
    if (rows[i].origin < 0) continue;
    double y = sigma[i] * y_std[i];
    if (rows[i].origin_eq)
      out.duals_eq[rows[i].origin] = y;
    else
      out.duals_ub[rows[i].origin] = y;
  }
  out.kkt_residual = lp.violation(out.point);
  return out;
}

}  // namespace sitopt
