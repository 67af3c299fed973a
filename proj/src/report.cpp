#include "hodiff/report.hpp"

#include <cmath>

namespace hodiff {

ReportBuilder::ReportBuilder(std::string identity, int n, Tolerance tol) {
  report_.identity = std::move(identity);
  report_.n = n;
  report_.tol = tol;
}

void ReportBuilder::add(const Residual& r, double x, std::vector<std::string> functions) {
  const double mag = std::abs(r.value);
  ++report_.samples;
  report_.vacuous = false;
  report_.max_scale = std::max(report_.max_scale, r.scale);
  report_.max_normalized = std::max(report_.max_normalized, mag / report_.tol.bound(r.scale));
  if (!report_.worst || mag > report_.max_abs_residual) {
    report_.max_abs_residual = mag;
    report_.worst = WorstCase{x, std::move(functions)};
  }
}

void ReportBuilder::add_error(std::string message) {
  ++report_.samples;
  report_.vacuous = false;
  report_.errors.push_back(std::move(message));
}

ResidualReport ReportBuilder::finish() const {
  ResidualReport r = report_;
  r.pass = r.errors.empty() && r.max_abs_residual <= r.tol.bound(r.max_scale);
  return r;
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["name"] = r.identity;
  j["n"] = r.n;
  j["samples"] = r.samples;
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_scale"] = r.max_scale;
  j["max_normalized"] = r.max_normalized;
  if (r.worst) {
    j["worst_case"] = {{"x", r.worst->x}, {"functions", r.worst->functions}};
  } else {
    j["worst_case"] = nullptr;
  }
  j["tol_abs"] = r.tol.abs;
  j["tol_rel"] = r.tol.rel;
  j["pass"] = r.pass;
  j["vacuous"] = r.vacuous;
  if (!r.errors.empty()) j["errors"] = r.errors;
  return j;
}

}  // namespace hodiff
