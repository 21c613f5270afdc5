#pragma once

#include "sitopt/engine.hpp"
#include "sitopt/problem.hpp"

#include <string>

namespace sitopt {

/// Problem files:
///   {"name", "n_global", "n_nonglobal",
///    "objective": [{"num": T, "den": T}], "constraints": [{"gplus": T, "gminus": T}],
///    "signatures": {"gminus": [..], "fx": [..]}, "case": "A" | "B",
///    "domain": {"box": {"lb": [..], "ub": [..]}, "linear": [{"a": [..], "b": x}]},
///    "gamma0": x}
/// Terms T: {"affine": {"c": [..], "d": x}}, {"log2": {"c": [..], "d": x}},
///          {"sum": [T, ..]}, {"neg": T}, {"scale": {"k": x, "term": T}}, or a number.
/// Infinite bounds are written as null. Malformed input throws SchemaError.
StructuredProblem problem_from_json(const std::string& text);
std::string problem_to_json(const StructuredProblem& p);
StructuredProblem load_problem(const std::string& path);
void save_problem(const std::string& path, const StructuredProblem& p);

/// One JSON object per line: {"k", "lower", "upper", "beta", "action", "gamma"},
/// plus "incumbent" on incumbent updates.
std::string trace_to_json(const TraceRecord& r);
/// Status, value, point and counters of a solve.
std::string outcome_to_json(const SolveOutcome& out, const StructuredProblem& p);

}  // namespace sitopt
