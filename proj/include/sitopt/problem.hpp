#pragma once

#include "sitopt/lp.hpp"
#include "sitopt/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sitopt {

enum class CaseTag { A, B };
enum class Identification { Tight, Separable };

const char* to_string(CaseTag c);
const char* to_string(Identification id);

/// f_plus / f_minus
struct RatioPair {
  Term num;
  Term den;
};

/// g_plus(x, xi) - g_minus(x) <= 0
struct ConstraintPair {
  Term gplus;
  Term gminus;
};

/// a . v <= b
struct LinearRow {
  Vec a;
  double b = 0.0;
};

/// Convex set C: variable bounds plus linear inequalities over v = (x, xi).
struct Domain {
  Vec lower;
  Vec upper;
  std::vector<LinearRow> rows;
};

/// Encoding of  max_{(x,xi) in C} min_j f+_j / f-_j  s.t.  g+_i(x,xi) - g-_i(x) <= 0.
/// Variables are ordered v = (x, xi) with the n_global global variables first.
struct StructuredProblem {
  std::string name;
  Index n_global = 0;
  Index n_nonglobal = 0;
  std::vector<RatioPair> objective;
  std::vector<ConstraintPair> constraints;
  /// +1: every g-minus is nondecreasing in x_j, -1: nonincreasing.
  std::vector<int> gminus_signature;
  /// Case B only: same convention for the x-parts of gamma f- - f+ and of every g+.
  std::vector<int> fx_signature;
  CaseTag case_tag = CaseTag::B;
  Domain domain;
  /// Suggested starting gamma when the solver configuration does not set one.
  std::optional<double> gamma0;

  Index dim() const { return n_global + n_nonglobal; }

  double constraint(size_t i, const Vec& v) const;
  /// max_i (g+_i - g-_i), -inf without constraints.
  double max_constraint(const Vec& v) const;
  /// min_j f+_j / f-_j; throws InvalidInput when a denominator is not positive.
  double ratio(const Vec& v) const;
  /// Largest violation of the bounds and rows of C.
  double domain_violation(const Vec& v) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  bool mentions(const std::string& needle) const;
};

/// Checks the mechanically verifiable parts of the Case A / Case B assumptions.
/// `gamma0` is the starting level the solver will use (default: the problem's
/// hint, else 0); convexity and monotonicity of gamma f- - f+ depend on its sign.
ValidationReport validate_problem(const StructuredProblem& p, std::optional<double> gamma0 = {});

struct BoxRegion {
  Vec lower;
  Vec upper;
  double beta = 0.0;
  Vec witness_x;
  Vec witness_y;
  std::optional<Vec> witness_xi;

  Index dim() const { return lower.size(); }
  bool contains(const Vec& x, double tol = 0.0) const;
  double max_width() const;
  /// Every edge has zero length.
  bool is_point() const { return max_width() <= 0.0; }
};

/// Box hull of the x-projection of C, by one LP per bound and coordinate.
/// Throws UnboundedDomain or EmptyDomain.
BoxRegion initial_box(const StructuredProblem& p, double lp_tol = 1e-9);

/// Corner with c_j = upper_j if s_j = +1 else lower_j.
Vec common_maximizer(const std::vector<int>& signature, const BoxRegion& box);
/// Corner with c_j = lower_j if s_j = +1 else upper_j.
Vec common_minimizer(const std::vector<int>& signature, const BoxRegion& box);

/// Splits a separable term into its x-part and xi-part (both over the full
/// variable vector, constant offset kept in the x-part). Throws InvalidInput
/// when a log2 leaf mixes global and non-global variables.
std::pair<Term, Term> split_separable(const Term& t, Index n_global);

/// Linear program over v with C's bounds and rows and zero cost.
LinearProgram domain_lp(const StructuredProblem& p);

}  // namespace sitopt
