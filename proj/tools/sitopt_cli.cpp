#include "sitopt/bench.hpp"
#include "sitopt/channels.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"
#include "sitopt/problem_json.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace sitopt;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInfeasible = 2, kBudget = 3, kInput = 4 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::SchemaError:
    case ErrorCode::UnboundedDomain:
    case ErrorCode::EmptyDomain:
    case ErrorCode::ZeroVolumeBox:
    case ErrorCode::IncompatibleCombination:
    case ErrorCode::NonMonotoneObjective:
      return kInput;
    default:
      return kFailure;
  }
}

StructuredProblem builtin(const std::string& name, std::uint64_t seed, long index, double snr, int config,
                          const std::string& objective, int K, int kappa, const std::string& ident) {
  const Identification id = ident == "separable" ? Identification::Separable : Identification::Tight;
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "mwrc-snd" || name == "mwrc-rs") {
    auto cr = generate_channel(seed, index, ChannelModel::Mwrc);
    MwrcChannel ch = make_mwrc_channel({cr.h[0], cr.h[1], cr.h[2]}, snr);
    ObjectiveSpec obj = objective == "gee" ? mwrc_gee() : mwrc_sum_rate();
    if (name == "mwrc-rs") return build_mwrc_rs(ch, reconstructed_hk_table(ch), obj, true);
    return build_mwrc_snd(ch, decode_config(config), obj, id);
  }
  if (name == "gic") {
    auto cr = generate_channel(seed, index, ChannelModel::Gic, K);
    return build_gic(make_gic(K, kappa, cr.h, 1.0, std::pow(10.0, -snr / 10.0)), id);
  }
  throw Error(ErrorCode::InvalidInput, "unknown built-in problem \"" + name + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Successive incumbent transcending branch and bound"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file");
  std::string problem_path, trace_path;
  SolverConfig cfg;
  double gamma0 = 0.0;
  solve_cmd->add_option("problem", problem_path, "Problem JSON")->required();
  solve_cmd->add_option("--eps", cfg.epsilon, "Essential feasibility tolerance");
  solve_cmd->add_option("--eta", cfg.eta, "Objective precision");
  auto* g0 = solve_cmd->add_option("--gamma0", gamma0, "Starting gamma");
  solve_cmd->add_option("--max-nodes", cfg.max_nodes, "Node budget");
  solve_cmd->add_option("--trace", trace_path, "Write one JSON record per box event to this file");

  auto* export_cmd = app.add_subcommand("export", "Write a built-in problem as JSON");
  std::string name, out_path, objective = "sum-rate", ident = "tight";
  std::uint64_t seed = 1;
  long index = 0;
  double snr = 10.0;
  int config = 7, K = 3, kappa = 2;
  export_cmd->add_option("name", name, "example1, example2, mwrc-snd, mwrc-rs or gic")->required();
  export_cmd->add_option("-o,--output", out_path, "Output file")->required();
  export_cmd->add_option("--seed", seed, "Master seed");
  export_cmd->add_option("--index", index, "Realization index");
  export_cmd->add_option("--snr", snr, "SNR in dB");
  export_cmd->add_option("--config", config, "MWRC decoder configuration 0..7");
  export_cmd->add_option("--objective", objective, "sum-rate or gee");
  export_cmd->add_option("--identification", ident, "tight or separable");
  export_cmd->add_option("--K", K, "GIC users");
  export_cmd->add_option("--kappa", kappa, "GIC global variables");

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
  std::string bench_cfg, bench_out;
  int threads = 0;
  bench_cmd->add_option("config", bench_cfg, "Bench config JSON")->required();
  bench_cmd->add_option("-o,--output", bench_out, "Result CSV")->required();
  bench_cmd->add_option("--threads", threads, "Override the worker count");

  auto* agg_cmd = app.add_subcommand("aggregate", "Mean and median per (snr, scheme)");
  std::string agg_in, agg_out;
  agg_cmd->add_option("input", agg_in, "Result CSV")->required();
  agg_cmd->add_option("-o,--output", agg_out, "Summary CSV")->required();

  auto* ch_cmd = app.add_subcommand("channels", "Generate seeded channel realizations");
  long count = 1;
  std::string model = "mwrc", ch_out;
  ch_cmd->add_option("--seed", seed, "Master seed");
  ch_cmd->add_option("--count", count, "Number of realizations");
  ch_cmd->add_option("--model", model, "mwrc or gic")->check(CLI::IsMember({"mwrc", "gic"}));
  ch_cmd->add_option("--K", K, "GIC users");
  ch_cmd->add_option("--snr", snr, "SNR in dB stored with each realization");
  ch_cmd->add_option("-o,--output", ch_out, "Output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*solve_cmd) {
      StructuredProblem p = load_problem(problem_path);
      if (*g0) cfg.gamma0 = gamma0;
      std::ofstream trace;
      TraceSink sink;
      if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) throw Error(ErrorCode::InvalidInput, "cannot write " + trace_path);
        sink = [&trace](const TraceRecord& r) { trace << trace_to_json(r) << '\n'; };
      }
      SolveOutcome out = solve(p, cfg, sink);
      std::cout << outcome_to_json(out, p) << '\n';
      if (out.status == SolveStatus::EssentialInfeasible) return kInfeasible;
      if (out.status == SolveStatus::NodeBudgetExceeded) return kBudget;
      return kOk;
    }
    if (*export_cmd) {
      save_problem(out_path, builtin(name, seed, index, snr, config, objective, K, kappa, ident));
      return kOk;
    }
    if (*bench_cmd) {
      BenchConfig bc = BenchConfig::load(bench_cfg);
      if (threads > 0) bc.threads = threads;
      auto rows = run_benchmark(bc);
      write_results_csv(bench_out, rows);
      std::cerr << rows.size() << " rows written to " << bench_out << '\n';
      return kOk;
    }
    if (*agg_cmd) {
      auto s = aggregate_file(agg_in, agg_out);
      std::cerr << s.size() << " groups written to " << agg_out << '\n';
      return kOk;
    }
    if (*ch_cmd) {
      auto chs = generate_channels(seed, count, model == "gic" ? ChannelModel::Gic : ChannelModel::Mwrc, K, snr);
      save_channels(ch_out, chs);
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
