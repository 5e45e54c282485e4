#include "growthlift/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace growthlift {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string format_double(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GROWTHLIFT_SEED");
  if (!env || !*env) return 0;
  std::uint64_t seed = 0;
  const auto res = std::from_chars(env, env + std::string(env).size(), seed);
  if (res.ec != std::errc{} || *res.ptr != '\0')
    throw ParameterError("GROWTHLIFT_SEED: must be a nonnegative integer");
  return seed;
}

namespace {

json parse_json_or_throw(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw ParameterError(std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParameterError(field + ": must be a number");
  return v.get<double>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("path: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ProblemSpec parse_problem_spec(const std::string& json_text) {
  const json j = parse_json_or_throw(json_text, "spec");
  if (!j.is_object()) throw ParameterError("spec: top level must be an object");
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (key != "kind" && key != "n" && key != "params" && key != "seed")
      throw ParameterError(key + ": unknown field in problem spec");
  }
  ProblemSpec s;
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ParameterError("kind: required string field");
  s.kind = parse_builtin_kind(j.at("kind").get<std::string>());
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw ParameterError("n: required integer field");
  s.n = j.at("n").get<int>();
  if (s.n < 1) throw ParameterError("n: must be >= 1");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned())
      throw ParameterError("seed: must be an integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  } else {
    s.seed = default_seed();
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw ParameterError("params: must be an object");
    for (const auto& [key, val] : p.items()) {
      if (key == "alpha") {
        s.params.alpha = as_double(val, "params.alpha");
      } else if (key == "exponent") {
        s.params.exponent = as_double(val, "params.exponent");
      } else if (key == "f_star") {
        s.params.f_star = as_double(val, "params.f_star");
      } else if (key == "x_star") {
        if (!val.is_array()) throw ParameterError("params.x_star: must be an array");
        Vec xs(val.size());
        int i = 0;
        for (const auto& e : val) xs(i++) = as_double(e, "params.x_star");
        s.params.x_star = xs;
      } else if (key == "extra_pieces") {
        if (!val.is_number_integer()) throw ParameterError("params.extra_pieces: must be an integer");
        s.params.extra_pieces = val.get<int>();
      } else if (key == "radius") {
        s.params.radius = as_double(val, "params.radius");
      } else {
        throw ParameterError("params." + key + ": unknown field");
      }
    }
  }
  return s;
}

ProblemSpec load_problem_spec(const std::string& path) {
  return parse_problem_spec(read_file(path));
}

std::string to_canonical_json(const ProblemSpec& spec) {
  ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["n"] = spec.n;
  ordered_json p;
  p["alpha"] = spec.params.alpha;
  p["exponent"] = spec.params.exponent;
  p["f_star"] = spec.params.f_star;
  const Vec xs = spec.params.x_star ? *spec.params.x_star : Vec::Zero(spec.n);
  p["x_star"] = std::vector<double>(xs.data(), xs.data() + xs.size());
  p["extra_pieces"] = spec.params.extra_pieces;
  p["radius"] = spec.params.radius;
  j["params"] = p;
  j["seed"] = spec.seed;
  return j.dump();
}

ProblemInstance build(const ProblemSpec& spec) {
  return make_builtin(spec.kind, spec.n, spec.params, spec.seed);
}

BoundParams parse_bound_params(const std::string& json_text) {
  const json j = parse_json_or_throw(json_text, "params");
  if (!j.is_object()) throw ParameterError("params: top level must be an object");
  BoundParams P;
  for (const auto& [key, val] : j.items()) {
    if (key == "dist0") P.dist0 = as_double(val, key);
    else if (key == "gap0") P.gap0 = as_double(val, key);
    else if (key == "rho") P.rho = as_double(val, key);
    else if (key == "beta") P.beta = as_double(val, key);
    else if (key == "L") P.L = as_double(val, key);
    else if (key == "alpha") P.alpha = as_double(val, key);
    else if (key == "p") P.p = as_double(val, key);
    else if (key == "epsilon") P.epsilon = as_double(val, key);
    else if (key == "D") P.D = as_double(val, key);
    else if (key == "eta0") P.eta0 = as_double(val, key);
    else if (key == "M") P.M = as_double(val, key);
    else throw ParameterError(key + ": unknown bound parameter");
  }
  return P;
}

BoundParams load_bound_params(const std::string& path) {
  return parse_bound_params(read_file(path));
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "k,step_kind,value,gap,dist,stepsize,model_gap\n";
  for (const TraceRecord& r : trace.records) {
    os << r.k << ',' << to_string(r.step) << ',' << format_double(r.value) << ','
       << format_double(r.gap) << ',' << format_double(r.dist) << ','
       << format_double(r.stepsize) << ',';
    if (!std::isnan(r.model_gap)) os << format_double(r.model_gap);
    os << '\n';
  }
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const CheckReport& r : reports) {
    ordered_json o;
    o["check"] = r.check;
    o["pass"] = r.pass;
    o["worst_residual"] = r.worst_residual;
    o["at_iteration"] = r.at_iteration;
    if (!r.note.empty()) o["note"] = r.note;
    arr.push_back(o);
  }
  return arr.dump();
}

Vec parse_vec(const std::string& comma_separated) {
  std::vector<double> vals;
  std::string token;
  std::istringstream ss(comma_separated);
  while (std::getline(ss, token, ',')) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && *begin == ' ') ++begin;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
      throw ParameterError("x0: cannot parse component '" + token + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ParameterError("x0: empty vector");
  Vec out(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out(static_cast<int>(i)) = vals[i];
  return out;
}

}  // namespace growthlift
