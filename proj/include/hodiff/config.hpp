#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hodiff/operators.hpp"
#include "hodiff/recovery.hpp"
#include "hodiff/report.hpp"

namespace hodiff {

/// Command-line overrides applied on top of a configuration file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  int jobs = 0;
};

struct CheckSpec {
  std::string type;
  std::string name;
  std::string path;  // JSON pointer of the entry, for messages
  nlohmann::json params;
};

struct RecoverySpec {
  std::vector<double> grid;
  ProbeConfig probes;
  std::vector<SmoothFn> holdout;
  Tolerance tol = kValidationTolerance;
};

struct RunConfig {
  Domain domain = Domain::real_line();
  Operator op = make_derivative(1);
  int n = 1;
  std::uint64_t seed = 42;
  std::vector<CheckSpec> checks;
  std::optional<RecoverySpec> recovery;
};

/// Validates and builds a run from parsed JSON. Errors are ConfigError with
/// the JSON pointer of the offending entry.
RunConfig load_config(const nlohmann::json& cfg);
RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Runs every declared check in declaration order.
std::vector<ResidualReport> run_checks(const RunConfig& run, const Overrides& ov = {});

struct RecoveryOutcome {
  CoefficientProfile profile;
  ResidualReport validation;
};

RecoveryOutcome run_recovery(const RunConfig& run, const Overrides& ov = {});

nlohmann::json profile_to_json(const CoefficientProfile& p);

/// 0 iff every report passes.
int exit_code(const std::vector<ResidualReport>& reports);

}  // namespace hodiff
