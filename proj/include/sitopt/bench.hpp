#pragma once

#include "sitopt/engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sitopt {

struct BenchConfig {
  /// mwrc-snd, mwrc-ian, mwrc-trad, mwrc-rs, gic, example1, example2 or custom.
  std::string problem = "mwrc-snd";
  /// sum-rate or gee (MWRC problems); other problems carry their own objective.
  std::string objective = "sum-rate";
  std::vector<double> snr_db{10.0};
  long realizations = 1;
  std::uint64_t seed = 1;
  double epsilon = 1e-5;
  double eta = 0.01;
  std::string identification = "tight";
  /// sit or dinkelbach.
  std::string solver = "sit";
  double lambda_tol = 1e-4;
  std::vector<int> gic_K{3};
  std::vector<int> gic_kappa{2};
  double phi = 4.0;
  double pc = 1.0;
  long max_nodes = 1000000;
  int threads = 1;
  std::string custom_file;

  /// Throws InvalidInput on out-of-range fields.
  void check() const;
  /// Missing fields keep their defaults; throws SchemaError on malformed input.
  static BenchConfig from_json(const std::string& text);
  static BenchConfig load(const std::string& path);
};

struct ResultRow {
  std::uint64_t seed = 0;
  long idx = 0;
  double snr_db = 0.0;
  std::string scheme;
  double value = 0.0;  // NaN without an incumbent
  std::string status;
  long nodes = 0;
  long subs = 0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kResultHeader = "seed,idx,snr_db,scheme,value,status,nodes,subs,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "snr_db,scheme,count,value_mean,value_median,nodes_mean,nodes_median,wall_time_mean,wall_time_median";

/// One row per (realization, snr, scheme), ordered by that key. A failing
/// solve is recorded with status "error:<code>" and the run continues.
std::vector<ResultRow> run_benchmark(const BenchConfig& cfg);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
/// Throws SchemaError on a wrong header or malformed row.
std::vector<ResultRow> read_results_csv(const std::string& path);

struct SummaryRow {
  double snr_db = 0.0;
  std::string scheme;
  long count = 0;
  double value_mean = 0.0;  // over rows with a finite value
  double value_median = 0.0;
  double nodes_mean = 0.0;
  double nodes_median = 0.0;
  double wall_time_mean = 0.0;
  double wall_time_median = 0.0;
};

/// Median of an even count is the mean of the middle two; NaN for no data.
double median(std::vector<double> v);
double mean(const std::vector<double>& v);

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> aggregate_file(const std::string& in_path, const std::string& out_path);

}  // namespace sitopt
