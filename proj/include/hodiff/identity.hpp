#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hodiff/operators.hpp"
#include "hodiff/report.hpp"
#include "hodiff/sampling.hpp"

namespace hodiff {

/// sum_{i=0}^{n} (-1)^i sum_{|I|=i} (prod_{j in I} f_j(x)) D(prod_{k not in I} f_k)(x)
/// over subsets I of {1..n+1}, where n = fs.size() - 1.
Residual id_n_residual(const Operator& D, std::span<const SmoothFn> fs, double x);
double eval_id_n_residual(const Operator& D, std::span<const SmoothFn> fs, double x);

/// sum_{i=0}^{n} (-1)^i C(n+1,i) f(x)^i D(f^{n+1-i})(x)
Residual id_single_residual(const Operator& D, const SmoothFn& f, int n, double x);
double eval_id_single_residual(const Operator& D, const SmoothFn& f, int n, double x);

/// T_n(fg)(x) - sum_k C(n,k) T_k(f)(x) T_{n-k}(g)(x), with n = Ts.size() - 1.
Residual graded_leibniz_residual(std::span<const Operator> Ts, const SmoothFn& f,
                                 const SmoothFn& g, double x);
double eval_graded_leibniz_residual(std::span<const Operator> Ts, const SmoothFn& f,
                                    const SmoothFn& g, double x);

/// Number of subsets of {1..m} of each cardinality, counted by bitmask enumeration.
std::vector<std::uint64_t> subset_layer_sizes(int m);
/// sum_{i=0}^{n} (-1)^i C(n+1, i), in exact integer arithmetic.
std::int64_t alternating_binomial_sum(int n);

ResidualReport check_units(const Operator& D, std::span<const double> grid, Tolerance tol = {});
ResidualReport check_localization(const Operator& D, const SmoothFn& f1, const SmoothFn& f2,
                                  Interval J, std::span<const double> grid, Tolerance tol = {});
ResidualReport check_poly_annihilation(const Operator& D, int j, std::span<const double> grid,
                                       Tolerance tol = {});

struct SuiteConfig {
  std::uint64_t seed = 42;
  int tuples = 10;
  std::vector<double> grid;
  FamilyParams family;
  Tolerance tol;
};

struct SuiteResult {
  ResidualReport id_n;
  ResidualReport id_single;
  /// max over samples of |single - id_n(f,...,f)| / max(scale, tiny)
  double max_diagonal_gap = 0.0;

  /// Both identities folded into one report.
  ResidualReport combined() const;
};

/// Draws `tuples` random (n+1)-tuples and evaluates both identities at every
/// grid point. Samples are generated serially from the seed, evaluated in
/// parallel and reduced in index order, so the result does not depend on
/// `jobs` (0 = OpenMP default).
SuiteResult run_check_suite_detailed(const Operator& D, int n, const SuiteConfig& cfg, int jobs = 0);
/// Single-threaded reference for run_check_suite_detailed.
SuiteResult run_check_suite_serial(const Operator& D, int n, const SuiteConfig& cfg);
ResidualReport run_check_suite(const Operator& D, int n, const SuiteConfig& cfg, int jobs = 0);

}  // namespace hodiff
