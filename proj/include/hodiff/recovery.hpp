#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hodiff/operators.hpp"
#include "hodiff/report.hpp"

namespace hodiff {

/// Solves A x = b (A row-major, square) by Gaussian elimination with partial
/// pivoting. Throws RecoveryError on a numerically singular matrix.
std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b);
/// 1-norm condition number ||A||_1 ||A^-1||_1; +inf when singular.
double condition_1norm(const std::vector<double>& A, std::size_t n);

/// 1, -1, 2, -2, ... truncated to `count` values.
std::vector<double> default_probes(int count);

inline constexpr double kConditionWarning = 1e8;

struct PointRecovery {
  double x = 0.0;
  std::vector<double> c;
  std::vector<double> d;
  double condition_c = 0.0;
  double condition_d = 0.0;
  std::vector<std::string> warnings;
};

/// Reads c_i(x0) off exponential probes exp(lambda (x - x0)) and d_i(x0) off
/// constant probes e^mu. With more than n probes the systems are solved in
/// the least-squares sense.
PointRecovery recover_at_point(const Operator& D, int n, double x0, std::span<const double> lambdas,
                               std::span<const double> mus);
PointRecovery recover_at_point(const Operator& D, int n, double x0);

struct RecoveryRow {
  double x = 0.0;
  std::optional<PointRecovery> result;
  std::string error;
};

struct CoefficientProfile {
  int n = 0;
  std::vector<RecoveryRow> rows;
  /// Largest change of any coefficient between adjacent recovered rows.
  double max_adjacent_jump = 0.0;

  std::size_t failures() const;
};

struct ProbeConfig {
  std::vector<double> lambdas;  // empty: default_probes(n)
  std::vector<double> mus;
};

/// Pointwise recovery over the grid, rows in grid order. Per-point failures
/// are recorded in the row rather than thrown.
CoefficientProfile recover_profile(const Operator& D, int n, std::span<const double> grid,
                                   const ProbeConfig& probes = {}, int jobs = 0);
CoefficientProfile recover_profile_serial(const Operator& D, int n, std::span<const double> grid,
                                          const ProbeConfig& probes = {});

inline constexpr Tolerance kValidationTolerance{1e-9, 1e-6};

/// Compares D against the canonical operator with the recovered coefficients
/// on holdout functions at every recovered grid point.
ResidualReport validate_recovery(const Operator& D, const CoefficientProfile& recovered,
                                 std::span<const SmoothFn> holdout,
                                 Tolerance tol = kValidationTolerance);

}  // namespace hodiff
