#pragma once

#include "sitopt/engine.hpp"
#include "sitopt/problem.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sitopt {

using Complex = std::complex<double>;

struct ObjectiveSpec {
  enum class Kind { WeightedSumRate, RateProfile, GEE, MinWeightedEE, ProportionalFairness };
  Kind kind = Kind::WeightedSumRate;
  Vec weights;  // rate weights (WSR, rate profile, min weighted EE)
  Vec phi;      // inverse power-amplifier efficiencies (GEE, min weighted EE)
  double pc = 1.0;  // circuit power (GEE)
  Vec pc_user;      // per-user circuit power (min weighted EE)

  static ObjectiveSpec weighted_sum_rate(Vec w);
  static ObjectiveSpec rate_profile(Vec w);
  static ObjectiveSpec gee(Vec phi, double pc);
  static ObjectiveSpec min_weighted_ee(Vec phi, Vec pc_user, Vec w);
  static ObjectiveSpec proportional_fairness();
};

const char* to_string(ObjectiveSpec::Kind k);

/// a'R <= log2(1 + b'p / (c'p + sigma)), with signal_offset adding constant
/// received power from transmitters whose power is fixed:
/// a'R <= log2((b + c)'p + sigma + signal_offset) - log2(c'p + sigma).
struct RateConstraint {
  Vec a;
  Vec b;
  Vec c;
  double sigma = 1.0;
  double signal_offset = 0.0;
};

struct InterferenceNetworkSpec {
  std::string name = "network";
  Index n_powers = 0;  // global variables p
  Index n_rates = 0;   // non-global variables R
  std::vector<RateConstraint> constraints;
  Vec max_power;
  double min_rate = 0.0;
  ObjectiveSpec objective;
  /// Overrides the case chosen from the objective and identification.
  std::optional<CaseTag> force_case;
};

/// Tight:     g+ = a'R - log2((b+c)'p + sigma + s0),  g- = -log2(c'p + sigma)   (signature -1)
/// Separable: g+ = a'R + log2(c'p + sigma),           g- = log2((b+c)'p + sigma + s0) (signature +1)
/// Variables are (p, R) plus, for a rate profile, one trailing scalar t.
StructuredProblem build_interference_problem(const InterferenceNetworkSpec& net, Identification id);

// ---- Example network with a QoS and an information-leakage constraint ----

struct LeakageExample {
  double h1 = 10.0, h2 = 10.0;  // |h_i|^2
  double g1 = 0.5, g2 = 1.0;    // |g_i|^2
  double qos = std::log2(61.0);
  double leakage = std::log2(8.99);
  double p1_max = 5.0, p2_max = 5.0;
};

/// min p1 (encoded as max -p1) subject to
/// log2(1 + h1 p1 + h2 p2) >= qos and log2(1 + g1 p1) + log2(1 + g2 p2) <= leakage.
StructuredProblem build_leakage_example(const LeakageExample& ex = {});
StructuredProblem example1();
/// Leakage limit log2(9): the minimum p1 = 1 is an isolated feasible point.
StructuredProblem example2();

// ---- Multi-way relay channel ----

struct MwrcChannel {
  std::array<Complex, 3> h;
  std::array<Complex, 3> g;           // relay-to-user channels
  std::array<double, 3> snr_max;      // S-bar_k
  std::array<double, 3> relay_gain;   // g~_k = |g_k|^2 P0 / N_k
};

/// Reciprocal channel g = conj(h); every user and the relay get SNR 10^(snr_db / 10).
MwrcChannel make_mwrc_channel(const std::array<Complex, 3>& h, double snr_db);

enum class Decoder { IAN, SND };
using DecodeConfig = std::array<Decoder, 3>;
/// Bit k of index set selects SND for user k: 0 is all-IAN, 7 is all-SND.
DecodeConfig decode_config(int index);

/// Receiver and non-interested user of each message (0-based).
int mwrc_q(int k);
int mwrc_l(int k);

InterferenceNetworkSpec mwrc_network(const MwrcChannel& ch, const DecodeConfig& cfg, const ObjectiveSpec& obj);
StructuredProblem build_mwrc_snd(const MwrcChannel& ch, const DecodeConfig& cfg, const ObjectiveSpec& obj,
                                 Identification id = Identification::Tight);

/// Objective used by the MWRC experiments: sum rate, or GEE with phi = 4 and
/// P_c = 1 (relay power not counted).
ObjectiveSpec mwrc_sum_rate();
ObjectiveSpec mwrc_gee(double phi = 4.0, double pc = 1.0);

struct MwrcSndResult {
  SolveOutcome best;
  int best_config = -1;
  std::array<SolveOutcome, 8> per_config;
};

/// Solves all eight decoder configurations and keeps the best.
MwrcSndResult solve_mwrc_snd(const MwrcChannel& ch, const ObjectiveSpec& obj, Identification id,
                             const SolverConfig& cfg);

// ---- Rate splitting ----

/// One log2(1 + b'S / gamma_kappa) summand; b acts on (S^c, S^p).
struct HkLogTerm {
  Vec bc;  // coefficients of S^c (3)
  Vec bp;  // coefficients of S^p (3)
  int kappa = 0;
};

struct HkConstraint {
  Vec a;  // rate coefficients (3)
  std::vector<HkLogTerm> terms;
};

struct HkTable {
  std::vector<HkConstraint> rows;
};

/// Thirteen-row table in five families. The per-summand constants are a
/// reconstruction consistent with the stated interference-plus-noise terms.
HkTable reconstructed_hk_table(const MwrcChannel& ch);

/// gamma_k = 1 + |h_l(k)|^2 S^p_l(k) + g~_q(k)^-1 (1 + sum_i |h_i|^2 (S^c_i + S^p_i)).
/// Reduced form (default): globals (S^p, y) with y >= sum |h_k|^2 S^c_k replacing
/// the S^c sum, non-globals (S^c, R), Case A. Full form: globals (S^c, S^p),
/// non-globals R, Case A. Throws NonMonotoneObjective unless the objective
/// increases in R.
StructuredProblem build_mwrc_rs(const MwrcChannel& ch, const HkTable& table, const ObjectiveSpec& obj,
                                bool reduced = true);

/// Solves the reduced rate-splitting problem and replaces y in the incumbent by
/// sum |h_k|^2 S^c_k, which keeps it feasible with the same objective.
SolveOutcome solve_mwrc_rs(const MwrcChannel& ch, const ObjectiveSpec& obj, const SolverConfig& cfg);

// ---- Gaussian interference channel benchmark ----

struct GicSpec {
  int K = 3;
  int kappa = 2;
  std::vector<Complex> h;  // K x K row-major, h[k * K + j]: transmitter j to receiver k
  double max_power = 1.0;
  double noise = 0.01;
};

/// Applies the sparsity pattern: h_kj kept only for j = k, j = k+1 mod K, or j < kappa.
GicSpec make_gic(int K, int kappa, const std::vector<Complex>& h, double max_power = 1.0, double noise = 0.01);

/// Receiver k jointly decodes S_k = {k, k+1 mod K}; three MAC constraints per
/// receiver; powers j >= kappa are fixed at their maximum; sum-rate objective.
InterferenceNetworkSpec gic_network(const GicSpec& spec);
StructuredProblem build_gic(const GicSpec& spec, Identification id = Identification::Tight);

}  // namespace sitopt
