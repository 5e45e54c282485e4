#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace growthlift {

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

std::vector<std::string> acceptance_ids();

/// Runs the full acceptance suite (deterministic given the seed) and returns
/// results sorted by criterion id. only_id filters the returned results; an
/// unknown id raises ParameterError.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::string& only_id = "");

std::string criteria_to_json(const std::vector<CriterionResult>& results, std::uint64_t seed);

}  // namespace growthlift
