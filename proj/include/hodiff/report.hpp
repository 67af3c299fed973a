#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hodiff {

struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-8;

  double bound(double scale) const noexcept { return abs + rel * scale; }
};

/// A signed alternating sum together with the largest |term| that entered it.
struct Residual {
  double value = 0.0;
  double scale = 0.0;
};

struct WorstCase {
  double x = 0.0;
  std::vector<std::string> functions;
};

/// Outcome of one identity check. `pass` holds iff
/// max_abs_residual <= tol.abs + tol.rel * max_scale and no sample errored.
struct ResidualReport {
  std::string identity;
  int n = 0;
  std::size_t samples = 0;
  double max_abs_residual = 0.0;
  double max_scale = 0.0;
  // max over samples of |r_s| / (tol.abs + tol.rel * scale_s)
  double max_normalized = 0.0;
  std::optional<WorstCase> worst;
  Tolerance tol;
  bool pass = true;
  bool vacuous = true;
  std::vector<std::string> errors;
};

/// Samples are folded in the order they are added; on equal residuals the
/// first worst case is kept.
class ReportBuilder {
 public:
  ReportBuilder(std::string identity, int n, Tolerance tol);

  void add(const Residual& r, double x, std::vector<std::string> functions);
  void add_error(std::string message);

  ResidualReport finish() const;

 private:
  ResidualReport report_;
};

nlohmann::json to_json(const ResidualReport& r);

}  // namespace hodiff
