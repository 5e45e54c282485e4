#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "growthlift/bounds.hpp"
#include "growthlift/harness.hpp"
#include "growthlift/problems.hpp"
#include "growthlift/types.hpp"

namespace growthlift {

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// GROWTHLIFT_SEED when set, else 0. Used by validate and whenever a problem
/// spec omits "seed".
std::uint64_t default_seed();

struct ProblemSpec {
  BuiltinKind kind = BuiltinKind::sharp_norm;
  int n = 1;
  BuiltinParams params;
  std::uint64_t seed = 0;
};

/// Strict parse: unknown or ill-typed fields raise ParameterError naming the field.
ProblemSpec parse_problem_spec(const std::string& json_text);
ProblemSpec load_problem_spec(const std::string& path);

/// Canonical serialization: fixed key order, all params resolved, shortest
/// doubles. serialize(parse(s)) == s for any canonical s.
std::string to_canonical_json(const ProblemSpec& spec);

ProblemInstance build(const ProblemSpec& spec);

BoundParams parse_bound_params(const std::string& json_text);
BoundParams load_bound_params(const std::string& path);

/// Columns exactly k,step_kind,value,gap,dist,stepsize,model_gap; model_gap is
/// empty for non-bundle rows.
void write_trace_csv(std::ostream& os, const Trace& trace);

std::string reports_to_json(const std::vector<CheckReport>& reports);

Vec parse_vec(const std::string& comma_separated);

}  // namespace growthlift
