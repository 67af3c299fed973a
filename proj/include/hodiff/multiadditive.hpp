#pragma once

#include <span>
#include <vector>

#include "hodiff/operators.hpp"
#include "hodiff/report.hpp"

namespace hodiff {

using FnPerturbation = std::vector<SmoothFn>;

/// P(g)(x) = D(exp o g)(x) / exp(g(x)).
Operator conjugate_exp(const Operator& D);

/// Delta_{h_1..h_m} T, evaluated as
///   sum_{S subset {1..m}} (-1)^(m-|S|) T(f + sum_{i in S} h_i)(x).
/// An empty perturbation returns T itself.
Operator iterated_difference(const Operator& T, const FnPerturbation& hs);

/// Same signed expansion as iterated_difference, with the largest |term| as scale.
Residual difference_residual(const Operator& T, const SmoothFn& f, const FnPerturbation& hs,
                             double x);

/// The symmetric form A_{n+1}(f_1..f_{n+1}) at x; identical to the id_n residual.
double eval_multiadd_form(const Operator& D, std::span<const SmoothFn> fs, double x);

/// (Delta_{h_1..h_m} P)(g)(x). Vanishing for m = n+1 certifies that P acts as a
/// polynomial of degree <= n in its argument at this probe.
Residual frechet_degree_residual(const Operator& P, const SmoothFn& g, const FnPerturbation& hs,
                                 double x);

/// G(x, v) = P(taylor polynomial with jet v at x)(x).
double eval_G(const Operator& P, double x, std::span<const double> v);

/// Mixed finite difference of v -> eval_G(P, x, v) along the given
/// increments (each of length v.size()).
Residual g_space_difference(const Operator& P, double x, std::span<const double> v,
                            std::span<const std::vector<double>> increments);

/// Largest |(n+1)-fold difference| of v -> G(x, v) over every multiset of
/// n+1 coordinate directions, each scaled by `step`.
Residual g_space_degree_residual(const Operator& P, double x, std::span<const double> v, int n,
                                 double step = 0.5);

}  // namespace hodiff
