#include "sitopt/problem_json.hpp"

#include "sitopt/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sitopt {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

Vec vec_from(const json& j, Index n, const std::string& what, double null_value = 0.0) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    schema(what + " must be an array of length " + std::to_string(n));
  Vec v(n);
  for (Index i = 0; i < n; ++i) {
    if (j[i].is_null())
      v[i] = null_value;
    else if (j[i].is_number())
      v[i] = j[i].get<double>();
    else
      schema(what + " must contain numbers");
  }
  return v;
}

json vec_to(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i]))
      a.push_back(v[i]);
    else
      a.push_back(nullptr);
  }
  return a;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) schema(what + " must be a number");
  return j.get<double>();
}

Affine affine_from(const json& j, Index n) {
  if (!j.is_object() || !j.contains("c")) schema("affine expressions need a coefficient array \"c\"");
  return Affine(vec_from(j.at("c"), n, "coefficient array"), j.contains("d") ? number(j.at("d"), "offset") : 0.0);
}

json affine_to(const Affine& a) { return {{"c", vec_to(a.coef)}, {"d", a.offset}}; }

Term term_from(const json& j, Index n) {
  if (j.is_number()) return Term::constant(n, j.get<double>());
  if (!j.is_object() || j.size() != 1) schema("a term must be a number or an object with exactly one key");
  const auto& [key, body] = *j.items().begin();
  if (key == "affine") return Term::affine(affine_from(body, n));
  if (key == "log2") return Term::log2(affine_from(body, n));
  if (key == "neg") return -term_from(body, n);
  if (key == "sum") {
    if (!body.is_array()) schema("\"sum\" takes an array of terms");
    Term t(n);
    for (const auto& e : body) t += term_from(e, n);
    return t;
  }
  if (key == "scale") {
    if (!body.is_object() || !body.contains("k") || !body.contains("term"))
      schema("\"scale\" takes {\"k\": number, \"term\": term}");
    return number(body.at("k"), "scale factor") * term_from(body.at("term"), n);
  }
  schema("unknown term kind \"" + key + "\"");
}

json term_to(const Term& t) {
  json parts = json::array();
  parts.push_back({{"affine", affine_to(t.linear())}});
  for (const auto& leaf : t.logs()) {
    json lg = {{"log2", affine_to(leaf.arg)}};
    if (leaf.weight == 1.0)
      parts.push_back(lg);
    else
      parts.push_back({{"scale", {{"k", leaf.weight}, {"term", lg}}}});
  }
  if (parts.size() == 1) return parts[0];
  return {{"sum", parts}};
}

std::vector<int> signature_from(const json& j, Index n, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    schema(what + " must be an array of length n_global");
  std::vector<int> s;
  for (const auto& e : j) {
    if (!e.is_number_integer() || (e.get<int>() != 1 && e.get<int>() != -1)) schema(what + " entries must be +1 or -1");
    s.push_back(e.get<int>());
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

StructuredProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) schema("problem must be a JSON object");
    StructuredProblem p;
    p.name = j.value("name", std::string("problem"));
    if (!j.contains("n_global") || !j.at("n_global").is_number_unsigned())
      schema("\"n_global\" must be a nonnegative integer");
    p.n_global = j.at("n_global").get<Index>();
    p.n_nonglobal = j.contains("n_nonglobal") ? j.at("n_nonglobal").get<Index>() : 0;
    if (p.n_nonglobal < 0) schema("\"n_nonglobal\" must be nonnegative");
    const Index n = p.dim();

    if (!j.contains("objective") || !j.at("objective").is_array() || j.at("objective").empty())
      schema("\"objective\" must be a nonempty array of {num, den}");
    for (const auto& o : j.at("objective")) {
      if (!o.contains("num")) schema("objective entries need \"num\"");
      Term den = o.contains("den") ? term_from(o.at("den"), n) : Term::constant(n, 1.0);
      p.objective.push_back({term_from(o.at("num"), n), den});
    }
    if (j.contains("constraints")) {
      if (!j.at("constraints").is_array()) schema("\"constraints\" must be an array");
      for (const auto& c : j.at("constraints")) {
        if (!c.contains("gplus")) schema("constraint entries need \"gplus\"");
        Term gm = c.contains("gminus") ? term_from(c.at("gminus"), n) : Term::constant(n, 0.0);
        p.constraints.push_back({term_from(c.at("gplus"), n), gm});
      }
    }
    const json sig = j.value("signatures", json::object());
    p.gminus_signature = sig.contains("gminus") ? signature_from(sig.at("gminus"), p.n_global, "gminus signature")
                                                : std::vector<int>(p.n_global, 1);
    p.fx_signature = sig.contains("fx") ? signature_from(sig.at("fx"), p.n_global, "fx signature")
                                        : std::vector<int>(p.n_global, 1);
    const std::string tag = j.value("case", std::string("A"));
    if (tag == "A")
      p.case_tag = CaseTag::A;
    else if (tag == "B")
      p.case_tag = CaseTag::B;
    else
      schema("\"case\" must be \"A\" or \"B\"");

    p.domain.lower = Vec::Constant(n, -kInf);
    p.domain.upper = Vec::Constant(n, kInf);
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (d.contains("box")) {
        const auto& b = d.at("box");
        if (b.contains("lb")) p.domain.lower = vec_from(b.at("lb"), n, "lower bounds", -kInf);
        if (b.contains("ub")) p.domain.upper = vec_from(b.at("ub"), n, "upper bounds", kInf);
      }
      if (d.contains("linear")) {
        for (const auto& r : d.at("linear"))
          p.domain.rows.push_back({vec_from(r.at("a"), n, "row coefficients"), number(r.at("b"), "row bound")});
      }
    }
    if (j.contains("gamma0") && !j.at("gamma0").is_null()) p.gamma0 = number(j.at("gamma0"), "gamma0");
    return p;
  } catch (const json::exception& e) {
    schema(std::string("invalid problem: ") + e.what());
  }
}

std::string problem_to_json(const StructuredProblem& p) {
  json j;
  j["name"] = p.name;
  j["n_global"] = p.n_global;
  j["n_nonglobal"] = p.n_nonglobal;
  j["objective"] = json::array();
  for (const auto& o : p.objective) j["objective"].push_back({{"num", term_to(o.num)}, {"den", term_to(o.den)}});
  j["constraints"] = json::array();
  for (const auto& c : p.constraints)
    j["constraints"].push_back({{"gplus", term_to(c.gplus)}, {"gminus", term_to(c.gminus)}});
  j["signatures"] = {{"gminus", p.gminus_signature}, {"fx", p.fx_signature}};
  j["case"] = to_string(p.case_tag);
  json rows = json::array();
  for (const auto& r : p.domain.rows) rows.push_back({{"a", vec_to(r.a)}, {"b", r.b}});
  j["domain"] = {{"box", {{"lb", vec_to(p.domain.lower)}, {"ub", vec_to(p.domain.upper)}}}, {"linear", rows}};
  if (p.gamma0) j["gamma0"] = *p.gamma0;
  return j.dump(2);
}

StructuredProblem load_problem(const std::string& path) { return problem_from_json(read_file(path)); }

void save_problem(const std::string& path, const StructuredProblem& p) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << problem_to_json(p) << '\n';
}

std::string trace_to_json(const TraceRecord& r) {
  json j = {{"k", r.k},
            {"lower", vec_to(r.lower)},
            {"upper", vec_to(r.upper)},
            {"beta", std::isfinite(r.beta) ? json(r.beta) : json(r.beta > 0 ? "inf" : "-inf")},
            {"action", to_string(r.action)},
            {"gamma", r.gamma}};
  if (r.incumbent.size()) j["incumbent"] = vec_to(r.incumbent);
  return j.dump();
}

std::string outcome_to_json(const SolveOutcome& out, const StructuredProblem& p) {
  json j;
  j["problem"] = p.name;
  j["status"] = to_string(out.status);
  j["value"] = out.incumbent.set() ? json(out.objective_value) : json(nullptr);
  j["x"] = out.incumbent.x_bar ? vec_to(*out.incumbent.x_bar) : json(nullptr);
  j["xi"] = out.incumbent.xi_bar ? vec_to(*out.incumbent.xi_bar) : json(nullptr);
  j["gamma"] = out.incumbent.gamma;
  j["nodes"] = out.nodes_expanded;
  j["subproblems"] = out.subproblems_solved;
  j["wall_time_s"] = out.wall_time;
  return j.dump(2);
}

}  // namespace sitopt
