#include "doctest.h"

#include "sitopt/channels.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"

#include <cmath>
#include <random>

using namespace sitopt;

namespace {

MwrcChannel channel(long index, double snr_db = 10.0) {
  auto r = generate_channel(21, index, ChannelModel::Mwrc, 3, snr_db);
  return make_mwrc_channel({r.h[0], r.h[1], r.h[2]}, snr_db);
}

// Best sum rate over R at fixed powers, as an LP over the compiled constraints.
double sum_rate_at(const StructuredProblem& p, const Vec& x) {
  const Index ng = p.n_global, nr = p.n_nonglobal;
  LinearProgram lp(nr);
  lp.cost = -Vec::Ones(nr);
  lp.lower = p.domain.lower.tail(nr);
  lp.upper = p.domain.upper.tail(nr);
  Vec z = Vec::Zero(p.dim());
  z.head(ng) = x;
  for (const auto& c : p.constraints) {
    Term g = c.gplus - c.gminus;
    lp.add_le(g.linear().coef.tail(nr), -g.value(z));
  }
  auto s = solve_lp(lp, 1e-11);
  REQUIRE(s.optimal());
  return -s.objective;
}

}  // namespace

TEST_CASE("channel helpers") {
  MwrcChannel ch = channel(0);
  for (int k = 0; k < 3; ++k) {
    CHECK(ch.g[k] == std::conj(ch.h[k]));
    CHECK(ch.snr_max[k] == doctest::Approx(10.0));
    CHECK(ch.relay_gain[k] == doctest::Approx(std::norm(ch.g[k]) * 10.0));
  }
  CHECK(mwrc_q(0) == 1);
  CHECK(mwrc_q(2) == 0);
  CHECK(mwrc_l(0) == 2);
  DecodeConfig c5 = decode_config(5);
  CHECK(c5[0] == Decoder::SND);
  CHECK(c5[1] == Decoder::IAN);
  CHECK(c5[2] == Decoder::SND);
}

TEST_CASE("both identifications encode the same constraints") {
  MwrcChannel ch = channel(1);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int cfg : {0, 3, 7}) {
    StructuredProblem t = build_mwrc_snd(ch, decode_config(cfg), mwrc_sum_rate(), Identification::Tight);
    StructuredProblem s = build_mwrc_snd(ch, decode_config(cfg), mwrc_sum_rate(), Identification::Separable);
    REQUIRE(t.constraints.size() == s.constraints.size());
    CHECK(validate_problem(t).ok());
    CHECK(validate_problem(s).ok());
    for (int trial = 0; trial < 20; ++trial) {
      Vec z(t.dim());
      for (Index j = 0; j < z.size(); ++j) z[j] = (j < 3 ? 10.0 : 3.0) * u(rng);
      for (size_t i = 0; i < t.constraints.size(); ++i)
        CHECK(t.constraint(i, z) == doctest::Approx(s.constraint(i, z)).epsilon(1e-10));
    }
  }
}

TEST_CASE("zero power forces zero rates") {
  MwrcChannel ch = channel(2);
  for (int cfg = 0; cfg < 8; ++cfg) {
    StructuredProblem p = build_mwrc_snd(ch, decode_config(cfg), mwrc_sum_rate());
    CHECK(sum_rate_at(p, Vec::Zero(3)) == doctest::Approx(0.0).scale(1.0));
    CHECK(initial_box(p).upper.isApprox(Vec::Constant(3, 10.0)));
  }
}

TEST_CASE("union of decoder regions dominates its members") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (long idx = 0; idx < 5; ++idx) {
    MwrcChannel ch = channel(idx);
    std::vector<StructuredProblem> ps;
    for (int cfg = 0; cfg < 8; ++cfg) ps.push_back(build_mwrc_snd(ch, decode_config(cfg), mwrc_sum_rate()));
    for (int trial = 0; trial < 5; ++trial) {
      Vec x(3);
      for (Index j = 0; j < 3; ++j) x[j] = u(rng);
      double best = 0.0;
      for (const auto& p : ps) best = std::max(best, sum_rate_at(p, x));
      CHECK(best >= sum_rate_at(ps[0], x));
      CHECK(best >= sum_rate_at(ps[7], x));
    }
  }
}

TEST_CASE("incumbent value at fixed power equals the LP optimum") {
  MwrcChannel ch = channel(3);
  StructuredProblem p = build_mwrc_snd(ch, decode_config(7), mwrc_sum_rate());
  Vec x = (Vec(3) << 3.0, 7.0, 5.0).finished();
  Incumbent inc = improve_incumbent(p, x, Incumbent{});
  REQUIRE(inc.set());
  // incumbent rates may use the feas_tol / 2 slack
  CHECK(std::abs(inc.value - sum_rate_at(p, x)) <= 1e-6);
}

TEST_CASE("case selection per objective and identification") {
  MwrcChannel ch = channel(4);
  auto cfg = decode_config(7);
  CHECK(build_mwrc_snd(ch, cfg, mwrc_sum_rate(), Identification::Tight).case_tag == CaseTag::B);
  CHECK(build_mwrc_snd(ch, cfg, mwrc_gee(), Identification::Tight).case_tag == CaseTag::A);
  StructuredProblem sep = build_mwrc_snd(ch, cfg, mwrc_gee(), Identification::Separable);
  CHECK(sep.case_tag == CaseTag::B);
  for (int s : sep.gminus_signature) CHECK(s == 1);

  InterferenceNetworkSpec net = mwrc_network(ch, cfg, mwrc_gee());
  net.force_case = CaseTag::B;
  CHECK_THROWS_AS(build_interference_problem(net, Identification::Tight), Error);
  net.force_case = CaseTag::A;
  CHECK_THROWS_AS(build_interference_problem(net, Identification::Separable), Error);
}

TEST_CASE("leakage example validates as case B") {
  StructuredProblem p = example1();
  CHECK(p.case_tag == CaseTag::B);
  CHECK(validate_problem(p).ok());
  CHECK(p.n_global == 2);
  CHECK(p.n_nonglobal == 0);
}

TEST_CASE("gic sizes and sparsity") {
  auto r = generate_channel(1, 0, ChannelModel::Gic, 7);
  GicSpec s = make_gic(7, 2, r.h);
  for (int k = 0; k < 7; ++k)
    for (int j = 0; j < 7; ++j) {
      bool kept = j == k || j == (k + 1) % 7 || j < 2;
      CHECK((std::abs(s.h[k * 7 + j]) > 0.0) == kept);
    }
  StructuredProblem p = build_gic(s);
  CHECK(p.n_global == 2);
  CHECK(p.n_nonglobal == 7);
  CHECK(p.constraints.size() == 21);

  StructuredProblem lp_only = build_gic(make_gic(3, 0, generate_channel(1, 1, ChannelModel::Gic, 3).h));
  SolveOutcome out = solve(lp_only);
  CHECK(out.status == SolveStatus::EssentialOptimal);
  CHECK(out.nodes_expanded == 1);
}

TEST_CASE("fixed full power dominates lower fixed power") {
  auto r = generate_channel(6, 0, ChannelModel::Gic, 3);
  GicSpec fixed = make_gic(3, 1, r.h);
  // same masked channel with every power free
  StructuredProblem pf = build_gic(fixed), pa = build_gic(make_gic(3, 3, fixed.h));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double p0 = u(rng);
    Vec xa = (Vec(3) << p0, u(rng), u(rng)).finished();
    Vec xf = (Vec(1) << p0).finished();
    CHECK(sum_rate_at(pf, xf) >= sum_rate_at(pa, xa) - 1e-9);
  }
}

TEST_CASE("rate splitting builder") {
  MwrcChannel ch = channel(5);
  HkTable table = reconstructed_hk_table(ch);
  CHECK(table.rows.size() == 13);
  StructuredProblem red = build_mwrc_rs(ch, table, mwrc_sum_rate(), true);
  StructuredProblem full = build_mwrc_rs(ch, table, mwrc_sum_rate(), false);
  CHECK(red.n_global == 4);
  CHECK(full.n_global == 6);
  CHECK(red.case_tag == CaseTag::A);
  BoxRegion box = initial_box(red);
  double y_max = 0.0;
  for (int k = 0; k < 3; ++k) y_max += std::norm(ch.h[k]) * ch.snr_max[k];
  CHECK(box.upper.head(3).isApprox(Vec::Constant(3, 10.0)));
  CHECK(box.upper[3] == doctest::Approx(y_max));

  ObjectiveSpec bad = ObjectiveSpec::weighted_sum_rate((Vec(3) << 1.0, -1.0, 1.0).finished());
  try {
    build_mwrc_rs(ch, table, bad);
    FAIL("expected NonMonotoneObjective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotoneObjective);
  }
}
