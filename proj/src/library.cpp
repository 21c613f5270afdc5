#include "sitopt/library.hpp"

#include "sitopt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nonnegative(const Vec& v) { return v.size() == 0 || v.minCoeff() >= 0.0; }

Vec unit(Index n, Index j) {
  Vec v = Vec::Zero(n);
  v[j] = 1.0;
  return v;
}

}  // namespace

ObjectiveSpec ObjectiveSpec::weighted_sum_rate(Vec w) {
  ObjectiveSpec o;
  o.kind = Kind::WeightedSumRate;
  o.weights = std::move(w);
  return o;
}

ObjectiveSpec ObjectiveSpec::rate_profile(Vec w) {
  ObjectiveSpec o;
  o.kind = Kind::RateProfile;
  o.weights = std::move(w);
  return o;
}

ObjectiveSpec ObjectiveSpec::gee(Vec phi, double pc) {
  ObjectiveSpec o;
  o.kind = Kind::GEE;
  o.phi = std::move(phi);
  o.pc = pc;
  return o;
}

ObjectiveSpec ObjectiveSpec::min_weighted_ee(Vec phi, Vec pc_user, Vec w) {
  ObjectiveSpec o;
  o.kind = Kind::MinWeightedEE;
  o.phi = std::move(phi);
  o.pc_user = std::move(pc_user);
  o.weights = std::move(w);
  return o;
}

ObjectiveSpec ObjectiveSpec::proportional_fairness() {
  ObjectiveSpec o;
  o.kind = Kind::ProportionalFairness;
  return o;
}

const char* to_string(ObjectiveSpec::Kind k) {
  switch (k) {
    case ObjectiveSpec::Kind::WeightedSumRate: return "wsr";
    case ObjectiveSpec::Kind::RateProfile: return "rate-profile";
    case ObjectiveSpec::Kind::GEE: return "gee";
    case ObjectiveSpec::Kind::MinWeightedEE: return "min-ee";
    case ObjectiveSpec::Kind::ProportionalFairness: return "proportional-fairness";
  }
  return "unknown";
}

StructuredProblem build_interference_problem(const InterferenceNetworkSpec& net, Identification id) {
  using Kind = ObjectiveSpec::Kind;
  const Index np = net.n_powers, nr = net.n_rates;
  const ObjectiveSpec& obj = net.objective;
  const bool profile = obj.kind == Kind::RateProfile;
  const Index n = np + nr + (profile ? 1 : 0);

  if (net.max_power.size() != np || !nonnegative(net.max_power))
    throw Error(ErrorCode::InvalidInput, "max_power must hold one nonnegative entry per power");
  for (const auto& c : net.constraints) {
    if (c.a.size() != nr || c.b.size() != np || c.c.size() != np)
      throw Error(ErrorCode::InvalidInput, "rate constraint dimensions do not match the network");
    if (!nonnegative(c.a) || !nonnegative(c.b) || !nonnegative(c.c) || c.signal_offset < 0.0)
      throw Error(ErrorCode::InvalidInput, "rate constraint coefficients must be nonnegative");
    if (!(c.sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "noise power must be positive");
  }

  const bool fractional = obj.kind == Kind::GEE || obj.kind == Kind::MinWeightedEE;
  CaseTag tag;
  if (net.force_case)
    tag = *net.force_case;
  else if (fractional)
    tag = id == Identification::Tight ? CaseTag::A : CaseTag::B;
  else
    tag = CaseTag::B;
  if (tag == CaseTag::A && id == Identification::Separable)
    throw Error(ErrorCode::IncompatibleCombination,
                "separable identification gives a concave g-plus, which Case A cannot bound");
  if (tag == CaseTag::B && id == Identification::Tight && fractional)
    throw Error(ErrorCode::IncompatibleCombination,
                "a power-dependent denominator has no common minimizer with the tight identification");

  StructuredProblem p;
  p.name = net.name;
  p.n_global = np;
  p.n_nonglobal = n - np;
  p.case_tag = tag;
  p.domain.lower = Vec::Zero(n);
  p.domain.upper = Vec::Constant(n, kInf);
  p.domain.upper.head(np) = net.max_power;
  p.domain.lower.segment(np, nr).setConstant(net.min_rate);

  for (const auto& c : net.constraints) {
    Vec ar = Vec::Zero(n), bc = Vec::Zero(n), cc = Vec::Zero(n);
    ar.segment(np, nr) = c.a;
    bc.head(np) = c.b + c.c;
    cc.head(np) = c.c;
    Term rates = Term::affine(ar, 0.0);
    Term signal = Term::log2(Affine(bc, c.sigma + c.signal_offset));
    Term noise = Term::log2(Affine(cc, c.sigma));
    if (id == Identification::Tight)
      p.constraints.push_back({rates - signal, -noise});
    else
      p.constraints.push_back({rates + noise, signal});
  }
  int sig = id == Identification::Tight ? -1 : 1;
  p.gminus_signature.assign(np, sig);
  p.fx_signature.assign(np, sig);

  Term one = Term::constant(n, 1.0);
  auto rate_sum = [&](const Vec& w) {
    Vec c = Vec::Zero(n);
    c.segment(np, nr) = w;
    return Term::affine(c, 0.0);
  };
  switch (obj.kind) {
    case Kind::WeightedSumRate: {
      if (obj.weights.size() != nr || !nonnegative(obj.weights))
        throw Error(ErrorCode::InvalidInput, "weights must be nonnegative, one per rate");
      p.objective.push_back({rate_sum(obj.weights), one});
      p.gamma0 = 0.0;
      break;
    }
    case Kind::RateProfile: {
      if (obj.weights.size() != nr || !nonnegative(obj.weights) || !(obj.weights.norm() > 0.0))
        throw Error(ErrorCode::InvalidInput, "profile weights must be nonnegative and nonzero");
      Vec w = obj.weights / obj.weights.norm();
      // t w_k <= R_k
      for (Index k = 0; k < nr; ++k) {
        Vec a = Vec::Zero(n);
        a[n - 1] = w[k];
        a[np + k] = -1.0;
        p.domain.rows.push_back({a, 0.0});
      }
      p.objective.push_back({Term::variable(n, n - 1), one});
      p.gamma0 = 0.0;
      break;
    }
    case Kind::GEE: {
      if (obj.phi.size() != np || !(obj.pc > 0.0))
        throw Error(ErrorCode::InvalidInput, "GEE needs one phi per power and a positive circuit power");
      if (obj.phi.size() && obj.phi.minCoeff() < 1.0)
        throw Error(ErrorCode::InvalidInput, "inverse amplifier efficiencies must be at least 1");
      Vec c = Vec::Zero(n);
      c.head(np) = obj.phi;
      p.objective.push_back({rate_sum(Vec::Ones(nr)), Term::affine(c, obj.pc)});
      p.gamma0 = 0.0;
      break;
    }
    case Kind::MinWeightedEE: {
      if (np != nr || obj.phi.size() != np || obj.pc_user.size() != np || obj.weights.size() != nr)
        throw Error(ErrorCode::InvalidInput, "min weighted EE needs one power, phi, P_c and weight per user");
      for (Index k = 0; k < nr; ++k) {
        if (!(obj.weights[k] > 0.0) || !(obj.pc_user[k] > 0.0) || obj.phi[k] < 1.0)
          throw Error(ErrorCode::InvalidInput, "min weighted EE parameters out of range");
        Vec c = Vec::Zero(n);
        c[k] = obj.weights[k] * obj.phi[k];
        p.objective.push_back({Term::variable(n, np + k), Term::affine(c, obj.weights[k] * obj.pc_user[k])});
      }
      p.gamma0 = 0.0;
      break;
    }
    case Kind::ProportionalFairness: {
      if (!(net.min_rate > 0.0))
        throw Error(ErrorCode::InvalidInput, "proportional fairness needs a positive minimum rate");
      Term f(n);
      for (Index k = 0; k < nr; ++k) f += Term::log2(Affine(unit(n, np + k), 0.0));
      p.objective.push_back({f, one});
      p.gamma0 = static_cast<double>(nr) * std::log2(net.min_rate);
      break;
    }
  }
  return p;
}

StructuredProblem build_leakage_example(const LeakageExample& ex) {
  const Index n = 2;
  StructuredProblem p;
  p.name = "leakage-example";
  p.n_global = 2;
  p.n_nonglobal = 0;
  p.case_tag = CaseTag::B;
  p.domain.lower = Vec::Zero(n);
  p.domain.upper = (Vec(2) << ex.p1_max, ex.p2_max).finished();
  p.objective.push_back({Term::variable(n, 0, -1.0), Term::constant(n, 1.0)});
  // QoS: qos - log2(1 + h1 p1 + h2 p2) <= 0
  p.constraints.push_back({Term::constant(n, ex.qos), Term::log2(Affine((Vec(2) << ex.h1, ex.h2).finished(), 1.0))});
  // leakage: log2(1 + g1 p1) + log2(1 + g2 p2) - leakage <= 0
  Term leak = Term::log2(Affine((Vec(2) << ex.g1, 0.0).finished(), 1.0)) +
              Term::log2(Affine((Vec(2) << 0.0, ex.g2).finished(), 1.0)) - ex.leakage;
  p.constraints.push_back({leak, Term::constant(n, 0.0)});
  p.gminus_signature = {1, 1};
  p.fx_signature = {1, 1};
  p.gamma0 = -ex.p1_max;
  return p;
}

StructuredProblem example1() {
  StructuredProblem p = build_leakage_example();
  p.name = "example1";
  return p;
}

StructuredProblem example2() {
  LeakageExample ex;
  ex.leakage = std::log2(9.0);
  StructuredProblem p = build_leakage_example(ex);
  p.name = "example2";
  return p;
}

MwrcChannel make_mwrc_channel(const std::array<Complex, 3>& h, double snr_db) {
  MwrcChannel ch;
  const double snr = std::pow(10.0, snr_db / 10.0);
  ch.h = h;
  for (int k = 0; k < 3; ++k) {
    ch.g[k] = std::conj(h[k]);
    ch.snr_max[k] = snr;
    ch.relay_gain[k] = std::norm(ch.g[k]) * snr;
  }
  return ch;
}

DecodeConfig decode_config(int index) {
  if (index < 0 || index > 7) throw Error(ErrorCode::InvalidInput, "decoder configuration index must be in 0..7");
  DecodeConfig cfg;
  for (int k = 0; k < 3; ++k) cfg[k] = (index >> k) & 1 ? Decoder::SND : Decoder::IAN;
  return cfg;
}

int mwrc_q(int k) { return (k + 1) % 3; }
int mwrc_l(int k) { return (k + 2) % 3; }

InterferenceNetworkSpec mwrc_network(const MwrcChannel& ch, const DecodeConfig& cfg, const ObjectiveSpec& obj) {
  InterferenceNetworkSpec net;
  net.name = "mwrc-snd";
  net.n_powers = 3;
  net.n_rates = 3;
  net.max_power = Vec(3);
  net.objective = obj;
  Vec gain(3);
  for (int k = 0; k < 3; ++k) {
    net.max_power[k] = ch.snr_max[k];
    gain[k] = std::norm(ch.h[k]);
  }
  for (int k = 0; k < 3; ++k) {
    const int q = mwrc_q(k), l = mwrc_l(k);
    if (!(ch.relay_gain[q] > 0.0)) throw Error(ErrorCode::InvalidInput, "relay gain must be positive");
    const double inv = 1.0 / ch.relay_gain[q];
    // delta_k(S) = 1 + inv (1 + sum_i |h_i|^2 S_i)
    Vec delta_c = inv * gain;
    const double delta_0 = 1.0 + inv;
    RateConstraint single;
    single.a = unit(3, k);
    single.b = gain[k] * unit(3, k);
    single.c = delta_c;
    single.sigma = delta_0;
    if (cfg[k] == Decoder::IAN) {
      single.c[l] += gain[l];  // gamma_k = delta_k + |h_l|^2 S_l
      net.constraints.push_back(single);
    } else {
      net.constraints.push_back(single);
      RateConstraint pair;
      pair.a = unit(3, k) + unit(3, l);
      pair.b = gain[k] * unit(3, k) + gain[l] * unit(3, l);
      pair.c = delta_c;
      pair.sigma = delta_0;
      net.constraints.push_back(pair);
    }
  }
  return net;
}

StructuredProblem build_mwrc_snd(const MwrcChannel& ch, const DecodeConfig& cfg, const ObjectiveSpec& obj,
                                 Identification id) {
  StructuredProblem p = build_interference_problem(mwrc_network(ch, cfg, obj), id);
  p.name = "mwrc-snd";
  return p;
}

ObjectiveSpec mwrc_sum_rate() { return ObjectiveSpec::weighted_sum_rate(Vec::Ones(3)); }
ObjectiveSpec mwrc_gee(double phi, double pc) { return ObjectiveSpec::gee(Vec::Constant(3, phi), pc); }

MwrcSndResult solve_mwrc_snd(const MwrcChannel& ch, const ObjectiveSpec& obj, Identification id,
                             const SolverConfig& cfg) {
  MwrcSndResult res;
  double best = -kInf;
  for (int c = 0; c < 8; ++c) {
    res.per_config[c] = solve(build_mwrc_snd(ch, decode_config(c), obj, id), cfg);
    const auto& o = res.per_config[c];
    if (o.incumbent.set() && o.objective_value > best) {
      best = o.objective_value;
      res.best_config = c;
    }
  }
  if (res.best_config >= 0) {
    res.best = res.per_config[res.best_config];
  } else {
    res.best = res.per_config[0];
  }
  // Counters describe the whole sweep.
  res.best.nodes_expanded = 0;
  res.best.subproblems_solved = 0;
  res.best.wall_time = 0.0;
  for (const auto& o : res.per_config) {
    res.best.nodes_expanded += o.nodes_expanded;
    res.best.subproblems_solved += o.subproblems_solved;
    res.best.wall_time += o.wall_time;
    if (o.status == SolveStatus::NodeBudgetExceeded) res.best.status = SolveStatus::NodeBudgetExceeded;
  }
  return res;
}

HkTable reconstructed_hk_table(const MwrcChannel& ch) {
  Vec gain(3);
  for (int k = 0; k < 3; ++k) gain[k] = std::norm(ch.h[k]);
  auto term = [&](int k, bool own_common, bool cross_common) {
    // own private part always, own common part optionally, common part of l(k) optionally
    HkLogTerm t;
    t.bc = Vec::Zero(3);
    t.bp = Vec::Zero(3);
    t.bp[k] = gain[k];
    if (own_common) t.bc[k] = gain[k];
    if (cross_common) t.bc[mwrc_l(k)] = gain[mwrc_l(k)];
    t.kappa = k;
    return t;
  };
  auto A = [&](int k) { return term(k, false, false); };
  auto B = [&](int k) { return term(k, true, false); };
  auto C = [&](int k) { return term(k, true, true); };
  auto D = [&](int k) { return term(k, false, true); };
  HkTable tab;
  for (int k = 0; k < 3; ++k) {
    const int q = mwrc_q(k), l = mwrc_l(k);
    tab.rows.push_back({unit(3, k), {B(k)}});
    tab.rows.push_back({unit(3, k) + unit(3, q), {A(k), D(q)}});
    tab.rows.push_back({Vec::Ones(3), {A(k), C(q), D(l)}});
    tab.rows.push_back({Vec::Ones(3) + unit(3, k), {A(k), C(q), C(l), D(k)}});
  }
  tab.rows.push_back({Vec::Ones(3), {C(0), C(1), C(2)}});
  return tab;
}

StructuredProblem build_mwrc_rs(const MwrcChannel& ch, const HkTable& table, const ObjectiveSpec& obj_in,
                                bool reduced) {
  using Kind = ObjectiveSpec::Kind;
  if (obj_in.weights.size() && obj_in.weights.minCoeff() < 0.0)
    throw Error(ErrorCode::NonMonotoneObjective, "a negative rate weight makes the objective decrease in R");
  // Compile the objective over (power, rate) first to check monotonicity in R.
  InterferenceNetworkSpec net;
  net.n_powers = 3;
  net.n_rates = 3;
  net.max_power = Vec::Ones(3);
  net.objective = obj_in;
  net.min_rate = obj_in.kind == Kind::ProportionalFairness ? 1e-3 : 0.0;
  net.force_case = CaseTag::A;
  StructuredProblem probe = build_interference_problem(net, Identification::Tight);
  for (const auto& pair : probe.objective) {
    for (Index k = 3; k < probe.dim(); ++k) {
      Monotonicity mn = pair.num.monotonicity(k), md = pair.den.monotonicity(k);
      bool ok = (mn == Monotonicity::Increasing || mn == Monotonicity::Constant) && md == Monotonicity::Constant;
      if (!ok) throw Error(ErrorCode::NonMonotoneObjective, "objective must be nondecreasing in the rates");
    }
  }

  Vec gain(3);
  double y_max = 0.0;
  for (int k = 0; k < 3; ++k) {
    gain[k] = std::norm(ch.h[k]);
    y_max += gain[k] * ch.snr_max[k];
  }
  // Layout. Reduced: (S^p[3], y, S^c[3], R[3], t?). Full: (S^c[3], S^p[3], R[3], t?).
  const bool profile = obj_in.kind == Kind::RateProfile;
  const Index ng = reduced ? 4 : 6;
  const Index n = ng + (reduced ? 3 : 0) + 3 + (profile ? 1 : 0);
  const Index sp = reduced ? 0 : 3, sc = reduced ? 4 : 0, yv = reduced ? 3 : -1, rv = reduced ? 7 : 6;

  StructuredProblem p;
  p.name = reduced ? "mwrc-rs" : "mwrc-rs-full";
  p.n_global = ng;
  p.n_nonglobal = n - ng;
  p.case_tag = CaseTag::A;
  p.domain.lower = Vec::Zero(n);
  p.domain.upper = Vec::Constant(n, kInf);
  for (int k = 0; k < 3; ++k) {
    p.domain.upper[sp + k] = ch.snr_max[k];
    p.domain.upper[sc + k] = ch.snr_max[k];
    Vec a = Vec::Zero(n);
    a[sp + k] = 1.0;
    a[sc + k] = 1.0;
    p.domain.rows.push_back({a, ch.snr_max[k]});
  }
  if (reduced) {
    p.domain.upper[yv] = y_max;
    Vec a = Vec::Zero(n);
    for (int k = 0; k < 3; ++k) a[sc + k] = gain[k];
    a[yv] = -1.0;
    p.domain.rows.push_back({a, 0.0});
  }

  // gamma_k as an affine function of the variables.
  auto gamma_aff = [&](int k) {
    const int q = mwrc_q(k), l = mwrc_l(k);
    const double inv = 1.0 / ch.relay_gain[q];
    Affine g = Affine::constant(n, 1.0 + inv);
    g.coef[sp + l] += gain[l];
    for (int i = 0; i < 3; ++i) {
      g.coef[sp + i] += inv * gain[i];
      if (!reduced) g.coef[sc + i] += inv * gain[i];
    }
    if (reduced) g.coef[yv] += inv;
    return g;
  };

  for (const auto& row : table.rows) {
    Vec ar = Vec::Zero(n);
    ar.segment(rv, 3) = row.a;
    Term gplus = Term::affine(ar, 0.0);
    Term gminus(n);
    for (const auto& t : row.terms) {
      Affine g = gamma_aff(t.kappa);
      Affine num = g;
      for (int i = 0; i < 3; ++i) {
        num.coef[sc + i] += t.bc[i];
        num.coef[sp + i] += t.bp[i];
      }
      gplus -= Term::log2(num);
      gminus -= Term::log2(g);
    }
    p.constraints.push_back({gplus, gminus});
  }
  p.gminus_signature.assign(ng, -1);

  // Objective over the final layout: powers are S^c + S^p.
  for (const auto& pair : probe.objective) {
    auto remap = [&](const Term& t) {
      std::vector<Index> map(probe.dim());
      Vec values = Vec::Zero(probe.dim());
      for (int k = 0; k < 3; ++k) map[k] = -1;
      for (int k = 0; k < 3; ++k) map[3 + k] = rv + k;
      if (profile) map[6] = n - 1;
      Term r = t.restrict(map, values, n);
      // power-dependent part: substitute p_k = S^c_k + S^p_k
      Vec pc = t.linear().coef.head(3);
      Vec c = Vec::Zero(n);
      for (int k = 0; k < 3; ++k) {
        c[sc + k] = pc[k];
        c[sp + k] = pc[k];
      }
      for (const auto& leaf : t.logs())
        if (leaf.arg.coef.head(3).cwiseAbs().sum() > 0.0)
          throw Error(ErrorCode::InvalidInput, "objective logs of powers are not supported here");
      return r + Term::affine(c, 0.0);
    };
    p.objective.push_back({remap(pair.num), remap(pair.den)});
  }
  for (const auto& row : probe.domain.rows) {
    // rate-profile rows t w_k - R_k <= 0
    Vec a = Vec::Zero(n);
    a.segment(rv, 3) = row.a.segment(3, 3);
    if (profile) a[n - 1] = row.a[6];
    p.domain.rows.push_back({a, row.b});
  }
  p.domain.lower.segment(rv, 3).setConstant(net.min_rate);
  p.gamma0 = probe.gamma0;
  return p;
}

SolveOutcome solve_mwrc_rs(const MwrcChannel& ch, const ObjectiveSpec& obj, const SolverConfig& cfg) {
  SolveOutcome out = solve(build_mwrc_rs(ch, reconstructed_hk_table(ch), obj, true), cfg);
  if (out.incumbent.set()) {
    double y = 0.0;
    for (int k = 0; k < 3; ++k) y += std::norm(ch.h[k]) * (*out.incumbent.xi_bar)[k];
    (*out.incumbent.x_bar)[3] = y;
  }
  return out;
}

GicSpec make_gic(int K, int kappa, const std::vector<Complex>& h, double max_power, double noise) {
  if (K < 2 || kappa < 0 || kappa > K) throw Error(ErrorCode::InvalidInput, "GIC needs K >= 2 and 0 <= kappa <= K");
  if (static_cast<int>(h.size()) != K * K) throw Error(ErrorCode::InvalidInput, "GIC channel matrix must be K x K");
  GicSpec s;
  s.K = K;
  s.kappa = kappa;
  s.max_power = max_power;
  s.noise = noise;
  s.h.assign(h.size(), Complex(0.0, 0.0));
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j)
      if (j == k || j == (k + 1) % K || j < kappa) s.h[k * K + j] = h[k * K + j];
  return s;
}

InterferenceNetworkSpec gic_network(const GicSpec& s) {
  const int K = s.K, kappa = s.kappa;
  InterferenceNetworkSpec net;
  net.name = "gic";
  net.n_powers = kappa;
  net.n_rates = K;
  net.max_power = Vec::Constant(kappa, s.max_power);
  net.objective = ObjectiveSpec::weighted_sum_rate(Vec::Ones(K));
  for (int k = 0; k < K; ++k) {
    const int members[2] = {k, (k + 1) % K};
    // interference from global transmitters outside S_k
    Vec c = Vec::Zero(kappa);
    for (int j = 0; j < kappa; ++j)
      if (j != members[0] && j != members[1]) c[j] = std::norm(s.h[k * K + j]);
    for (int mask = 1; mask < 4; ++mask) {
      RateConstraint rc;
      rc.a = Vec::Zero(K);
      rc.b = Vec::Zero(kappa);
      rc.c = c;
      rc.sigma = s.noise;
      for (int t = 0; t < 2; ++t) {
        if (!((mask >> t) & 1)) continue;
        const int j = members[t];
        rc.a[j] = 1.0;
        const double g = std::norm(s.h[k * K + j]);
        if (j < kappa)
          rc.b[j] += g;
        else
          rc.signal_offset += g * s.max_power;
      }
      net.constraints.push_back(std::move(rc));
    }
  }
  return net;
}

StructuredProblem build_gic(const GicSpec& spec, Identification id) {
  StructuredProblem p = build_interference_problem(gic_network(spec), id);
  p.name = "gic";
  return p;
}

}  // namespace sitopt
