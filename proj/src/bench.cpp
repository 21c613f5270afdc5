#include "sitopt/bench.hpp"

#include "sitopt/channels.hpp"
#include "sitopt/dinkelbach.hpp"
#include "sitopt/error.hpp"
#include "sitopt/library.hpp"
#include "sitopt/problem_json.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sitopt {

namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kProblems = {"mwrc-snd", "mwrc-ian", "mwrc-trad", "mwrc-rs",
                                            "gic",      "example1", "example2",  "custom"};

template <class T>
std::vector<T> scalar_or_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

Identification parse_identification(const std::string& s) {
  if (s == "tight") return Identification::Tight;
  if (s == "separable") return Identification::Separable;
  throw Error(ErrorCode::InvalidInput, "identification must be tight or separable");
}

ObjectiveSpec mwrc_objective(const BenchConfig& cfg) {
  if (cfg.objective == "sum-rate") return mwrc_sum_rate();
  if (cfg.objective == "gee") return mwrc_gee(cfg.phi, cfg.pc);
  throw Error(ErrorCode::InvalidInput, "MWRC objective must be sum-rate or gee");
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, long line) {
  if (s == "nan") return kNaN;
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": expected a number, got \"" + s + "\"");
  }
}

long parse_long(const std::string& s, long line) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": expected an integer, got \"" + s + "\"");
  }
}

// Rows produced for one realization, in a fixed order.
std::vector<ResultRow> run_realization(const BenchConfig& cfg, long idx) {
  SolverConfig scfg;
  scfg.epsilon = cfg.epsilon;
  scfg.eta = cfg.eta;
  scfg.max_nodes = cfg.max_nodes;
  scfg.identification = parse_identification(cfg.identification);
  const bool dinkelbach = cfg.solver == "dinkelbach";

  auto run = [&](const StructuredProblem& p) {
    if (dinkelbach) return dinkelbach_solve(p, scfg, cfg.lambda_tol).outcome;
    return solve(p, scfg);
  };
  std::vector<ResultRow> rows;
  auto emit = [&](double snr, const std::string& scheme, const std::function<SolveOutcome()>& f) {
    ResultRow r;
    r.seed = cfg.seed;
    r.idx = idx;
    r.snr_db = snr;
    r.scheme = dinkelbach ? scheme + "-dinkelbach" : scheme;
    try {
      SolveOutcome o = f();
      r.value = o.incumbent.set() ? o.objective_value : kNaN;
      r.status = to_string(o.status);
      r.nodes = o.nodes_expanded;
      r.subs = o.subproblems_solved;
      r.wall_time_s = o.wall_time;
    } catch (const Error& e) {
      r.value = kNaN;
      r.status = std::string("error:") + to_string(e.code());
    }
    rows.push_back(std::move(r));
  };

  const std::string& prob = cfg.problem;
  for (double snr : cfg.snr_db) {
    if (prob.rfind("mwrc", 0) == 0) {
      ChannelRealization cr = generate_channel(cfg.seed, idx, ChannelModel::Mwrc);
      MwrcChannel ch = make_mwrc_channel({cr.h[0], cr.h[1], cr.h[2]}, snr);
      if (prob == "mwrc-snd") {
        std::vector<SolveOutcome> per(8);
        std::vector<bool> ok(8, false);
        for (int c = 0; c < 8; ++c) {
          emit(snr, "snd-c" + std::to_string(c), [&] {
            per[c] = run(build_mwrc_snd(ch, decode_config(c), mwrc_objective(cfg), scfg.identification));
            ok[c] = true;
            return per[c];
          });
        }
        // Best of the eight, with counters summed over the sweep.
        std::vector<ResultRow> cfgs(rows.end() - 8, rows.end());
        rows.erase(rows.end() - 8, rows.end());
        emit(snr, "snd", [&] {
          SolveOutcome best;
          int arg = -1;
          for (int c = 0; c < 8; ++c) {
            if (!ok[c]) throw Error(ErrorCode::NumericalFailure, "a decoder configuration failed");
            if (per[c].incumbent.set() && (arg < 0 || per[c].objective_value > per[arg].objective_value)) arg = c;
          }
          best = per[arg < 0 ? 0 : arg];
          best.nodes_expanded = best.subproblems_solved = 0;
          best.wall_time = 0.0;
          for (const auto& o : per) {
            best.nodes_expanded += o.nodes_expanded;
            best.subproblems_solved += o.subproblems_solved;
            best.wall_time += o.wall_time;
            if (o.status == SolveStatus::NodeBudgetExceeded) best.status = SolveStatus::NodeBudgetExceeded;
          }
          return best;
        });
        rows.insert(rows.end(), cfgs.begin(), cfgs.end());
      } else if (prob == "mwrc-ian") {
        emit(snr, "ian", [&] { return run(build_mwrc_snd(ch, decode_config(0), mwrc_objective(cfg), scfg.identification)); });
      } else if (prob == "mwrc-trad") {
        emit(snr, "trad-snd",
             [&] { return run(build_mwrc_snd(ch, decode_config(7), mwrc_objective(cfg), scfg.identification)); });
      } else if (prob == "mwrc-rs") {
        emit(snr, "rs", [&] {
          if (!dinkelbach) return solve_mwrc_rs(ch, mwrc_objective(cfg), scfg);
          return run(build_mwrc_rs(ch, reconstructed_hk_table(ch), mwrc_objective(cfg), true));
        });
      }
    } else if (prob == "gic") {
      const double noise = std::pow(10.0, -snr / 10.0);
      for (int K : cfg.gic_K) {
        ChannelRealization cr = generate_channel(cfg.seed, idx, ChannelModel::Gic, K);
        for (int kappa : cfg.gic_kappa) {
          emit(snr, "gic-K" + std::to_string(K) + "-kappa" + std::to_string(kappa),
               [&] { return run(build_gic(make_gic(K, kappa, cr.h, 1.0, noise), scfg.identification)); });
        }
      }
    } else if (prob == "example1") {
      emit(snr, "example1", [&] { return run(example1()); });
    } else if (prob == "example2") {
      emit(snr, "example2", [&] { return run(example2()); });
    } else if (prob == "custom") {
      emit(snr, "custom", [&] { return run(load_problem(cfg.custom_file)); });
    }
  }
  return rows;
}

}  // namespace

void BenchConfig::check() const {
  if (std::find(kProblems.begin(), kProblems.end(), problem) == kProblems.end())
    throw Error(ErrorCode::InvalidInput, "unknown problem \"" + problem + "\"");
  if (realizations < 1) throw Error(ErrorCode::InvalidInput, "realizations must be at least 1");
  if (snr_db.empty()) throw Error(ErrorCode::InvalidInput, "snr_db list must not be empty");
  if (!(epsilon > 0.0) || !(eta > 0.0)) throw Error(ErrorCode::InvalidInput, "eps and eta must be positive");
  if (solver != "sit" && solver != "dinkelbach") throw Error(ErrorCode::InvalidInput, "solver must be sit or dinkelbach");
  parse_identification(identification);
  if (max_nodes < 1) throw Error(ErrorCode::InvalidInput, "max_nodes must be positive");
  if (threads < 1) throw Error(ErrorCode::InvalidInput, "threads must be at least 1");
  if (problem == "gic") {
    if (gic_K.empty() || gic_kappa.empty()) throw Error(ErrorCode::InvalidInput, "gic needs K and kappa");
    for (int K : gic_K)
      for (int k : gic_kappa)
        if (K < 2 || k < 0 || k > K) throw Error(ErrorCode::InvalidInput, "gic needs K >= 2 and 0 <= kappa <= K");
  }
  if (problem.rfind("mwrc", 0) == 0 && objective != "sum-rate" && objective != "gee")
    throw Error(ErrorCode::InvalidInput, "MWRC objective must be sum-rate or gee");
  if (problem == "custom" && custom_file.empty()) throw Error(ErrorCode::InvalidInput, "custom problem needs custom_file");
}

BenchConfig BenchConfig::from_json(const std::string& text) {
  BenchConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "bench config must be a JSON object");
    c.problem = j.value("problem", c.problem);
    c.objective = j.value("objective", c.objective);
    if (j.contains("snr_db")) c.snr_db = scalar_or_list<double>(j.at("snr_db"));
    c.realizations = j.value("realizations", c.realizations);
    c.seed = j.value("seed", c.seed);
    c.epsilon = j.value("eps", c.epsilon);
    c.eta = j.value("eta", c.eta);
    c.identification = j.value("identification", c.identification);
    c.solver = j.value("solver", c.solver);
    c.lambda_tol = j.value("lambda_tol", c.lambda_tol);
    if (j.contains("gic")) {
      const auto& g = j.at("gic");
      if (g.contains("K")) c.gic_K = scalar_or_list<int>(g.at("K"));
      if (g.contains("kappa")) c.gic_kappa = scalar_or_list<int>(g.at("kappa"));
    }
    c.phi = j.value("phi", c.phi);
    c.pc = j.value("pc", c.pc);
    c.max_nodes = j.value("max_nodes", c.max_nodes);
    c.threads = j.value("threads", c.threads);
    c.custom_file = j.value("custom_file", c.custom_file);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid bench config: ") + e.what());
  }
  c.check();
  return c;
}

BenchConfig BenchConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

std::vector<ResultRow> run_benchmark(const BenchConfig& cfg) {
  cfg.check();
  const long n = cfg.realizations;
  std::vector<std::vector<ResultRow>> per(n);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next++; i < n; i = next++) per[i] = run_realization(cfg, i);
  };
  const int nt = static_cast<int>(std::min<long>(cfg.threads, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<ResultRow> rows;
  for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << kResultHeader << '\n';
  for (const auto& r : rows) {
    f << r.seed << ',' << r.idx << ',' << fmt(r.snr_db) << ',' << r.scheme << ',' << fmt(r.value) << ',' << r.status
      << ',' << r.nodes << ',' << r.subs << ',' << fmt(r.wall_time_s) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::string line;
  if (!std::getline(f, line) || line != kResultHeader)
    throw Error(ErrorCode::SchemaError, std::string("expected header ") + kResultHeader);
  std::vector<ResultRow> rows;
  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto c = split(line);
    if (c.size() != 9) throw Error(ErrorCode::SchemaError, "line " + std::to_string(lineno) + ": expected 9 fields");
    ResultRow r;
    try {
      r.seed = std::stoull(c[0]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(lineno) + ": bad seed");
    }
    r.idx = parse_long(c[1], lineno);
    r.snr_db = parse_double(c[2], lineno);
    r.scheme = c[3];
    r.value = parse_double(c[4], lineno);
    r.status = c[5];
    r.nodes = parse_long(c[6], lineno);
    r.subs = parse_long(c[7], lineno);
    r.wall_time_s = parse_double(c[8], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
  struct Acc {
    std::vector<double> value, nodes, wall;
    long count = 0;
  };
  std::map<std::pair<double, std::string>, Acc> groups;
  for (const auto& r : rows) {
    Acc& a = groups[{r.snr_db, r.scheme}];
    ++a.count;
    if (std::isfinite(r.value)) a.value.push_back(r.value);
    a.nodes.push_back(static_cast<double>(r.nodes));
    a.wall.push_back(r.wall_time_s);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, a] : groups) {
    SummaryRow s;
    s.snr_db = key.first;
    s.scheme = key.second;
    s.count = a.count;
    s.value_mean = mean(a.value);
    s.value_median = median(a.value);
    s.nodes_mean = mean(a.nodes);
    s.nodes_median = median(a.nodes);
    s.wall_time_mean = mean(a.wall);
    s.wall_time_median = median(a.wall);
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    f << fmt(s.snr_db) << ',' << s.scheme << ',' << s.count << ',' << fmt(s.value_mean) << ',' << fmt(s.value_median)
      << ',' << fmt(s.nodes_mean) << ',' << fmt(s.nodes_median) << ',' << fmt(s.wall_time_mean) << ','
      << fmt(s.wall_time_median) << '\n';
  }
}

std::vector<SummaryRow> aggregate_file(const std::string& in_path, const std::string& out_path) {
  auto s = aggregate(read_results_csv(in_path));
  write_summary_csv(out_path, s);
  return s;
}

}  // namespace sitopt
