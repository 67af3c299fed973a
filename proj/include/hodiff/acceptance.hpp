#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hodiff::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;   // one human-readable line
  nlohmann::json detail;  // deterministic measurements only
  double seconds = 0.0;   // wall time, not serialized
};

struct Options {
  std::uint64_t seed = 42;
  int jobs = 1;
  /// Re-run criteria 1-9 with a different thread count and compare reports.
  bool determinism = true;
};

std::vector<CriterionResult> run_all(const Options& opts = {});

/// Structured report without timing or timestamp fields.
nlohmann::json to_json(const std::vector<CriterionResult>& results, std::uint64_t seed);

}  // namespace hodiff::acceptance
