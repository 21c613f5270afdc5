#include "doctest.h"

#include "sitopt/channels.hpp"
#include "sitopt/dinkelbach.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"

#include <cmath>

using namespace sitopt;

namespace {

StructuredProblem gic_ratio(long index, double slope) {
  auto ch = generate_channel(17, index, ChannelModel::Gic, 3);
  StructuredProblem p = build_gic(make_gic(3, 2, ch.h), Identification::Separable);
  Vec c = Vec::Zero(p.dim());
  c.head(p.n_global).setConstant(slope);
  p.objective.front().den = Term::affine(c, 1.0);
  return p;
}

}  // namespace

TEST_CASE("constant denominator converges in two steps") {
  StructuredProblem p = gic_ratio(0, 0.0);
  p.objective.front().den = Term::constant(p.dim(), 2.0);
  SolverConfig cfg;
  cfg.eta = 1e-3;
  SolveOutcome direct = solve(p, cfg);
  DinkelbachOutcome d = dinkelbach_solve(p, cfg, 1e-3);
  CHECK(d.history.size() <= 2);
  CHECK(d.outcome.status == SolveStatus::EssentialOptimal);
  CHECK(std::abs(d.outcome.objective_value - direct.objective_value) <= 2 * cfg.eta);
}

TEST_CASE("power-dependent denominator") {
  for (long idx = 0; idx < 3; ++idx) {
    StructuredProblem p = gic_ratio(idx, 4.0);
    SolverConfig cfg;
    cfg.eta = 1e-2;
    SolveOutcome direct = solve(p, cfg);
    REQUIRE(direct.status == SolveStatus::EssentialOptimal);
    DinkelbachOutcome d = dinkelbach_solve(p, cfg, 1e-2);
    REQUIRE(d.outcome.status == SolveStatus::EssentialOptimal);
    CHECK(std::abs(d.outcome.objective_value - direct.objective_value) <= 2 * cfg.eta);
    CHECK(d.history.front().lambda == 0.0);
    long nodes = 0;
    for (size_t t = 0; t < d.history.size(); ++t) {
      nodes += d.history[t].nodes;
      if (t > 0) {
        CHECK(d.history[t].F <= d.history[t - 1].F + d.history[t - 1].inner_eta);
        CHECK(d.history[t].lambda >= d.history[t - 1].lambda);
        CHECK(d.history[t].inner_eta == doctest::Approx(d.history[t - 1].inner_eta / 2));
      }
    }
    CHECK(nodes == d.outcome.nodes_expanded);
    CHECK(d.history.back().F <= 1e-2);
    CHECK(std::abs(d.lambda - d.outcome.objective_value) <= 1e-2);
    Vec z = d.outcome.incumbent.point();
    CHECK(p.max_constraint(z) <= cfg.feas_tol);
  }
}

TEST_CASE("outer iteration cap") {
  StructuredProblem p = gic_ratio(1, 4.0);
  SolverConfig cfg;
  cfg.eta = 1e-2;
  try {
    dinkelbach_solve(p, cfg, 1e-9, 1);
    FAIL("expected MaxOuterIterations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxOuterIterations);
  }
}

TEST_CASE("rejects several ratio pairs") {
  StructuredProblem p = gic_ratio(0, 1.0);
  p.objective.push_back(p.objective.front());
  CHECK_THROWS_AS(dinkelbach_solve(p, SolverConfig{}), Error);
}
