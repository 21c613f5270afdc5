#pragma once

#include <Eigen/Dense>

#include <vector>

namespace sitopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// c·v + d over a fixed-length variable vector.
struct Affine {
  Vec coef;
  double offset = 0.0;

  Affine() = default;
  Affine(Vec c, double d) : coef(std::move(c)), offset(d) {}

  static Affine constant(Index dim, double d) { return {Vec::Zero(dim), d}; }

  Index dim() const { return coef.size(); }
  double operator()(const Vec& v) const { return coef.dot(v) + offset; }
  bool is_constant() const;

  /// Lowest value over lower <= v <= upper; -inf if unbounded below.
  double min_over(const Vec& lower, const Vec& upper) const;
  double max_over(const Vec& lower, const Vec& upper) const;
};

/// weight * log2(arg)
struct LogLeaf {
  double weight = 1.0;
  Affine arg;
};

enum class Monotonicity { Constant, Increasing, Decreasing, Mixed };

struct Interval {
  double lo;
  double hi;
};

/// Expression from the closed grammar {affine, log2(affine), negation, sums},
/// kept in the canonical form  affine + sum_k w_k log2(affine_k).
///
/// Evaluation uses extended values: a log2 leaf whose argument is not strictly
/// positive evaluates to -inf (w > 0) or +inf (w < 0), which keeps convex terms
/// convex and concave terms concave on all of R^n.
class Term {
 public:
  Term() = default;
  explicit Term(Index dim) : linear_(Affine::constant(dim, 0.0)) {}

  static Term affine(Vec c, double d);
  static Term affine(Affine a) { return affine(std::move(a.coef), a.offset); }
  static Term constant(Index dim, double d);
  static Term variable(Index dim, Index j, double coef = 1.0);
  static Term log2(Affine arg);
  /// Throws InvalidInput unless arg is affine.
  static Term log2(const Term& arg);

  Index dim() const { return linear_.dim(); }
  const Affine& linear() const { return linear_; }
  const std::vector<LogLeaf>& logs() const { return logs_; }

  Term operator-() const;
  Term& operator+=(const Term& other);
  Term& operator-=(const Term& other);
  Term& operator+=(double c);
  Term& operator*=(double k);
  friend Term operator+(Term a, const Term& b) { return a += b; }
  friend Term operator-(Term a, const Term& b) { return a -= b; }
  friend Term operator+(Term a, double c) { return a += c; }
  friend Term operator-(Term a, double c) { return a += -c; }
  friend Term operator*(double k, Term a) { return a *= k; }

  double value(const Vec& v) const;
  Vec gradient(const Vec& v) const;
  Mat hessian(const Vec& v) const;
  /// value, gradient and hessian in one pass; hess may be null.
  double evaluate(const Vec& v, Vec* grad, Mat* hess) const;

  bool is_affine() const { return logs_.empty(); }
  bool is_constant() const { return logs_.empty() && linear_.is_constant(); }
  bool depends_on(Index j) const;
  bool depends_on_range(Index begin, Index end) const;
  Monotonicity monotonicity(Index j) const;
  bool is_convex() const;
  bool is_concave() const;
  Interval range(const Vec& lower, const Vec& upper) const;

  /// New term over `new_dim` variables: map[j] >= 0 sends variable j to that
  /// index, map[j] < 0 freezes it at values[j].
  Term restrict(const std::vector<Index>& map, const Vec& values, Index new_dim) const;
  /// Same term over a larger vector; variable j moves to j + shift.
  Term embed(Index new_dim, Index shift = 0) const;
  /// Composition with v = base + basis * u.
  Term compose(const Mat& basis, const Vec& base) const;

 private:
  void fold_constant_logs();

  Affine linear_;
  std::vector<LogLeaf> logs_;
};

Monotonicity combine(Monotonicity a, Monotonicity b);

}  // namespace sitopt
