#include "doctest.h"

#include "sitopt/channels.hpp"
#include "sitopt/engine.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace sitopt;

namespace {

BoxRegion make_box(Vec lo, Vec hi) {
  BoxRegion b;
  b.lower = std::move(lo);
  b.upper = std::move(hi);
  return b;
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// Both leakage-example constraints written out by hand.
double qos_residual(const Vec& p, const LeakageExample& ex = {}) {
  return ex.qos - std::log2(1.0 + ex.h1 * p[0] + ex.h2 * p[1]);
}
double leak_residual(const Vec& p, const LeakageExample& ex = {}) {
  return std::log2(1.0 + ex.g1 * p[0]) + std::log2(1.0 + ex.g2 * p[1]) - ex.leakage;
}

StructuredProblem small_gic(std::uint64_t seed, long index) {
  auto ch = generate_channel(seed, index, ChannelModel::Gic, 3);
  return build_gic(make_gic(3, 2, ch.h));
}

// min_R max_i g_i(p, R) s.t. gamma f- - f+ <= 0, as an LP written from the
// evaluated terms: with p fixed every g_i is affine in R.
double point_dual_oracle(const StructuredProblem& p, const Vec& x, double gamma) {
  const Index ng = p.n_global, nr = p.n_nonglobal;
  LinearProgram lp(nr + 1);
  lp.cost.setZero();
  lp.cost[nr] = 1.0;
  lp.lower.head(nr) = p.domain.lower.tail(nr);
  lp.upper.head(nr) = p.domain.upper.tail(nr);
  lp.lower[nr] = -std::numeric_limits<double>::infinity();
  Vec z = Vec::Zero(p.dim());
  z.head(ng) = x;
  auto add_row = [&](const Term& t) {
    Vec row(nr + 1);
    row.head(nr) = t.linear().coef.tail(nr);
    row[nr] = -1.0;
    lp.add_le(row, -t.value(z));
  };
  for (const auto& c : p.constraints) add_row(c.gplus - c.gminus);
  const auto& f = p.objective.front();
  Term level = gamma * f.den - f.num;
  Vec row = Vec::Zero(nr + 1);
  row.head(nr) = level.linear().coef.tail(nr);
  lp.add_le(row, -level.value(z));
  auto s = solve_lp(lp, 1e-11);
  if (s.status == SubStatus::Infeasible) return std::numeric_limits<double>::infinity();
  REQUIRE(s.optimal());
  return s.objective;
}

}  // namespace

TEST_CASE("offer follows the update threshold") {
  Incumbent inc;
  Vec x = v2(0, 0), xi(0);
  CHECK(offer(inc, x, xi, 4.0, 0.01));
  CHECK(inc.gamma == doctest::Approx(4.01));
  CHECK(offer(inc, x, xi, 4.005, 0.01));
  CHECK(inc.gamma == doctest::Approx(4.015));
  CHECK_FALSE(offer(inc, x, xi, 4.004, 0.01));
  CHECK(inc.value == doctest::Approx(4.005));
}

TEST_CASE("bisect picks the widest witness gap") {
  BoxRegion box = make_box(v2(0, 0), v2(1, 1));
  auto [a, b] = bisect(box, v2(0, 0), v2(1, 1));
  CHECK(a.upper[0] == doctest::Approx(0.5));
  CHECK(a.upper[1] == 1.0);
  CHECK(b.lower[0] == doctest::Approx(0.5));
  CHECK(b.lower[1] == 0.0);

  auto [c, d] = bisect(box, v2(0.2, 0.1), v2(0.2, 0.9));
  CHECK(c.upper[1] == doctest::Approx(0.5));
  CHECK(c.upper[0] == 1.0);
  CHECK(d.lower[1] == doctest::Approx(0.5));

  BoxRegion wide = make_box(v2(0, 0), v2(1, 3));
  auto [e, f] = bisect(wide, v2(0.5, 1), v2(0.5, 1));
  CHECK(e.upper[1] == doctest::Approx(1.5));
  CHECK(f.lower[1] == doctest::Approx(1.5));

  BoxRegion point = make_box(v2(1, 1), v2(1, 1));
  CHECK_THROWS_AS(bisect(point, v2(1, 1), v2(1, 1)), Error);
}

TEST_CASE("common corners") {
  BoxRegion box = make_box(v2(0, 2), v2(1, 3));
  CHECK(common_maximizer({1, -1}, box).isApprox(v2(1, 2)));
  CHECK(common_minimizer({1, -1}, box).isApprox(v2(0, 3)));
  CHECK(common_maximizer({-1, -1}, box).isApprox(v2(0, 2)));
  CHECK(common_minimizer({-1, -1}, box).isApprox(v2(1, 3)));
}

TEST_CASE("leakage example bounds") {
  StructuredProblem p = example1();
  SolverConfig cfg;
  BoxRegion root = initial_box(p);
  CHECK(root.lower.isApprox(v2(0, 0)));
  CHECK(root.upper.isApprox(v2(5, 5)));
  BoundResult r = bound(p, root, 0.0, cfg);
  CHECK(r.beta <= 0.0);
  CHECK(root.contains(r.x_witness, 1e-9));
  CHECK(root.contains(r.y_witness, 1e-9));

  // QoS cannot be met anywhere in [0,1]^2.
  BoundResult q = bound(p, make_box(v2(0, 0), v2(1, 1)), 0.0, cfg);
  CHECK(q.beta > 0.0);
  CHECK(q.beta >= qos_residual(v2(1, 1)) - 1e-9);
}

TEST_CASE("bound is tight on degenerate boxes") {
  StructuredProblem p = example1();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    Vec x = v2(u(rng), u(rng));
    double gamma = -u(rng) - 1.0;
    double beta = bound(p, make_box(x, x), gamma).beta;
    if (gamma + x[0] > 0.0)
      CHECK(beta == std::numeric_limits<double>::infinity());
    else
      CHECK(beta == doctest::Approx(std::max(qos_residual(x), leak_residual(x))).epsilon(1e-8));
  }

  StructuredProblem g = small_gic(3, 0);
  std::uniform_real_distribution<double> pw(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Vec x = v2(pw(rng), pw(rng));
    double gamma = 4.0 * pw(rng);
    double oracle = point_dual_oracle(g, x, gamma);
    double beta = bound(g, make_box(x, x), gamma).beta;
    if (std::isinf(oracle))
      CHECK(beta == oracle);
    else
      CHECK(std::abs(beta - oracle) <= 1e-8);
  }
}

TEST_CASE("feasibility check at fixed powers") {
  StructuredProblem p = example1();
  // the printed optimum is rounded to six digits
  SolverConfig cfg;
  cfg.feas_tol = 2e-4;
  CHECK(std::max(qos_residual(v2(4.00665, 1.99335)), leak_residual(v2(4.00665, 1.99335))) <= 1e-4);
  CHECK(check_feasibility(p, v2(4.00665, 1.99335), cfg).has_value());
  CHECK_FALSE(check_feasibility(p, v2(0.9, 5), cfg).has_value());
}

TEST_CASE("leakage examples reach the nonisolated optimum") {
  SolverConfig cfg;
  cfg.epsilon = 1e-5;
  cfg.eta = 1e-3;
  SolveOutcome a = solve(example1(), cfg);
  REQUIRE(a.status == SolveStatus::EssentialOptimal);
  CHECK(std::abs(a.objective_value + 4.00665) <= 1e-3);

  SolveOutcome b = solve(example2(), cfg);
  REQUIRE(b.status == SolveStatus::EssentialOptimal);
  CHECK(std::abs(b.incumbent.x_bar->coeff(0) - 4.0) <= 1e-2);
}

TEST_CASE("unreachable QoS is essentially infeasible") {
  LeakageExample ex;
  ex.qos = std::log2(1e6);
  SolveOutcome out = solve(build_leakage_example(ex));
  CHECK(out.status == SolveStatus::EssentialInfeasible);
  CHECK_FALSE(out.incumbent.set());
  CHECK(std::isnan(out.objective_value));
}

TEST_CASE("trace invariants") {
  SolverConfig cfg;
  cfg.epsilon = 1e-5;
  cfg.eta = 1e-3;
  for (const StructuredProblem& p : {example1(), small_gic(5, 1), small_gic(5, 2)}) {
    double last_gamma = -std::numeric_limits<double>::infinity();
    bool monotone = true, sound = true, feasible = true;
    auto out = solve(p, cfg, [&](const TraceRecord& r) {
      if (r.action == TraceAction::IncumbentUpdate) {
        monotone = monotone && r.gamma > last_gamma;
        last_gamma = r.gamma;
        feasible = feasible && p.max_constraint(r.incumbent) <= cfg.feas_tol &&
                   p.domain_violation(r.incumbent) <= cfg.feas_tol;
      }
      if (r.action == TraceAction::Delete) sound = sound && r.beta > -cfg.epsilon;
      if (r.action == TraceAction::Retain) sound = sound && r.beta <= -cfg.epsilon;
    });
    CHECK(monotone);
    CHECK(sound);
    CHECK(feasible);
    REQUIRE(out.incumbent.set());
    Vec z = out.incumbent.point();
    CHECK(p.max_constraint(z) <= cfg.feas_tol);
    CHECK(p.domain_violation(z) <= cfg.feas_tol);
  }
}

TEST_CASE("identical ratio pairs do not change the outcome") {
  StructuredProblem p = small_gic(9, 0);
  StructuredProblem q = p;
  q.objective.push_back(p.objective.front());
  q.objective.push_back(p.objective.front());
  SolverConfig cfg;
  SolveOutcome a = solve(p, cfg), b = solve(q, cfg);
  CHECK(a.status == b.status);
  CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-9));
  CHECK(a.nodes_expanded == b.nodes_expanded);
}

TEST_CASE("node budget keeps a feasible incumbent") {
  SolverConfig cfg;
  cfg.max_nodes = 3;
  cfg.eta = 1e-4;
  SolveOutcome out = solve(small_gic(2, 0), cfg);
  CHECK(out.status == SolveStatus::NodeBudgetExceeded);
  CHECK(out.nodes_expanded == 3);
}

TEST_CASE("invalid configuration is rejected") {
  SolverConfig cfg;
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(solve(example1(), cfg), Error);
}
