#include "sitopt/term.hpp"

#include "sitopt/error.hpp"

#include <cmath>
#include <limits>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

Monotonicity sign_mono(double s) {
  if (s > 0) return Monotonicity::Increasing;
  if (s < 0) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::ZeroVolumeBox: return "ZeroVolumeBox";
    case ErrorCode::IncompatibleCombination: return "IncompatibleCombination";
    case ErrorCode::NonMonotoneObjective: return "NonMonotoneObjective";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::MaxOuterIterations: return "MaxOuterIterations";
  }
  return "Unknown";
}

bool Affine::is_constant() const {
  for (Index j = 0; j < coef.size(); ++j)
    if (coef[j] != 0.0) return false;
  return true;
}

double Affine::min_over(const Vec& lower, const Vec& upper) const {
  double s = offset;
  for (Index j = 0; j < coef.size(); ++j) {
    if (coef[j] > 0)
      s += coef[j] * lower[j];
    else if (coef[j] < 0)
      s += coef[j] * upper[j];
  }
  return s;
}

double Affine::max_over(const Vec& lower, const Vec& upper) const {
  double s = offset;
  for (Index j = 0; j < coef.size(); ++j) {
    if (coef[j] > 0)
      s += coef[j] * upper[j];
    else if (coef[j] < 0)
      s += coef[j] * lower[j];
  }
  return s;
}

Monotonicity combine(Monotonicity a, Monotonicity b) {
  if (a == Monotonicity::Constant) return b;
  if (b == Monotonicity::Constant) return a;
  return a == b ? a : Monotonicity::Mixed;
}

Term Term::affine(Vec c, double d) {
  Term t;
  t.linear_ = Affine(std::move(c), d);
  return t;
}

Term Term::constant(Index dim, double d) { return affine(Vec::Zero(dim), d); }

Term Term::variable(Index dim, Index j, double coef) {
  Vec c = Vec::Zero(dim);
  c[j] = coef;
  return affine(std::move(c), 0.0);
}

Term Term::log2(Affine arg) {
  Term t(arg.dim());
  t.logs_.push_back({1.0, std::move(arg)});
  t.fold_constant_logs();
  return t;
}

Term Term::log2(const Term& arg) {
  if (!arg.is_affine()) throw Error(ErrorCode::InvalidInput, "log2 argument must be affine");
  return log2(arg.linear_);
}

void Term::fold_constant_logs() {
  std::vector<LogLeaf> kept;
  kept.reserve(logs_.size());
  for (auto& leaf : logs_) {
    if (leaf.weight == 0.0) continue;
    if (leaf.arg.is_constant() && leaf.arg.offset > 0.0) {
      linear_.offset += leaf.weight * std::log2(leaf.arg.offset);
      continue;
    }
    kept.push_back(std::move(leaf));
  }
  logs_ = std::move(kept);
}

Term Term::operator-() const {
  Term t = *this;
  t *= -1.0;
  return t;
}

Term& Term::operator+=(const Term& other) {
  if (linear_.coef.size() == 0 && logs_.empty()) {
    *this = other;
    return *this;
  }
  if (other.dim() != dim()) throw Error(ErrorCode::InvalidInput, "term dimension mismatch");
  linear_.coef += other.linear_.coef;
  linear_.offset += other.linear_.offset;
  logs_.insert(logs_.end(), other.logs_.begin(), other.logs_.end());
  return *this;
}

Term& Term::operator-=(const Term& other) { return *this += -other; }

Term& Term::operator+=(double c) {
  linear_.offset += c;
  return *this;
}

Term& Term::operator*=(double k) {
  linear_.coef *= k;
  linear_.offset *= k;
  for (auto& leaf : logs_) leaf.weight *= k;
  if (k == 0.0) logs_.clear();
  return *this;
}

double Term::value(const Vec& v) const { return evaluate(v, nullptr, nullptr); }

Vec Term::gradient(const Vec& v) const {
  Vec g;
  evaluate(v, &g, nullptr);
  return g;
}

Mat Term::hessian(const Vec& v) const {
  Vec g;
  Mat h;
  evaluate(v, &g, &h);
  return h;
}

double Term::evaluate(const Vec& v, Vec* grad, Mat* hess) const {
  double val = linear_(v);
  if (grad) *grad = linear_.coef;
  if (hess) *hess = Mat::Zero(dim(), dim());
  for (const auto& leaf : logs_) {
    double u = leaf.arg(v);
    if (!(u > 0.0)) {
      val += leaf.weight > 0 ? -kInf : kInf;
      continue;
    }
    val += leaf.weight * std::log2(u);
    double s = leaf.weight / (u * kLn2);
    if (grad) *grad += s * leaf.arg.coef;
    if (hess) hess->noalias() -= (s / u) * leaf.arg.coef * leaf.arg.coef.transpose();
  }
  return val;
}

bool Term::depends_on(Index j) const {
  if (linear_.coef[j] != 0.0) return true;
  for (const auto& leaf : logs_)
    if (leaf.arg.coef[j] != 0.0) return true;
  return false;
}

bool Term::depends_on_range(Index begin, Index end) const {
  for (Index j = begin; j < end; ++j)
    if (depends_on(j)) return true;
  return false;
}

Monotonicity Term::monotonicity(Index j) const {
  Monotonicity m = sign_mono(linear_.coef[j]);
  // On the domain where the logs are defined, d/dv_j [w log2(u)] has the sign of w * a_j.
  for (const auto& leaf : logs_) m = combine(m, sign_mono(leaf.weight * leaf.arg.coef[j]));
  return m;
}

bool Term::is_convex() const {
  for (const auto& leaf : logs_)
    if (leaf.weight > 0 && !leaf.arg.is_constant()) return false;
  return true;
}

bool Term::is_concave() const {
  for (const auto& leaf : logs_)
    if (leaf.weight < 0 && !leaf.arg.is_constant()) return false;
  return true;
}

Interval Term::range(const Vec& lower, const Vec& upper) const {
  Interval r{linear_.min_over(lower, upper), linear_.max_over(lower, upper)};
  for (const auto& leaf : logs_) {
    double ulo = leaf.arg.min_over(lower, upper);
    double uhi = leaf.arg.max_over(lower, upper);
    double llo = ulo > 0 ? std::log2(ulo) : -kInf;
    double lhi = uhi > 0 ? std::log2(uhi) : -kInf;
    if (leaf.weight > 0) {
      r.lo += leaf.weight * llo;
      r.hi += leaf.weight * lhi;
    } else {
      r.lo += leaf.weight * lhi;
      r.hi += leaf.weight * llo;
    }
  }
  return r;
}

Term Term::restrict(const std::vector<Index>& map, const Vec& values, Index new_dim) const {
  auto restrict_affine = [&](const Affine& a) {
    Affine out = Affine::constant(new_dim, a.offset);
    for (Index j = 0; j < a.dim(); ++j) {
      if (a.coef[j] == 0.0) continue;
      if (map[j] >= 0)
        out.coef[map[j]] += a.coef[j];
      else
        out.offset += a.coef[j] * values[j];
    }
    return out;
  };
  Term t;
  t.linear_ = restrict_affine(linear_);
  t.logs_.reserve(logs_.size());
  for (const auto& leaf : logs_) t.logs_.push_back({leaf.weight, restrict_affine(leaf.arg)});
  t.fold_constant_logs();
  return t;
}

Term Term::embed(Index new_dim, Index shift) const {
  auto embed_affine = [&](const Affine& a) {
    Affine out = Affine::constant(new_dim, a.offset);
    out.coef.segment(shift, a.dim()) = a.coef;
    return out;
  };
  Term t;
  t.linear_ = embed_affine(linear_);
  for (const auto& leaf : logs_) t.logs_.push_back({leaf.weight, embed_affine(leaf.arg)});
  return t;
}

Term Term::compose(const Mat& basis, const Vec& base) const {
  auto compose_affine = [&](const Affine& a) {
    return Affine(basis.transpose() * a.coef, a.offset + a.coef.dot(base));
  };
  Term t;
  t.linear_ = compose_affine(linear_);
  for (const auto& leaf : logs_) t.logs_.push_back({leaf.weight, compose_affine(leaf.arg)});
  t.fold_constant_logs();
  return t;
}

}  // namespace sitopt
