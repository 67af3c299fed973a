#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hodiff/function_space.hpp"
#include "hodiff/operators.hpp"

namespace hodiff {

using Rng = std::mt19937_64;

enum class FunctionFamily {
  Polynomial,   // p(x)
  Exponential,  // exp(q(x))
  ExpProduct,   // p(x) * exp(q(x))
  Mixed,        // one of the three, chosen uniformly
};

struct FamilyParams {
  FunctionFamily family = FunctionFamily::Mixed;
  int max_degree = 3;
  double coeff_bound = 2.0;
};

std::vector<double> random_coefficients(Rng& rng, int degree, double bound);
SmoothFn random_function(Rng& rng, const FamilyParams& params = {});
std::vector<SmoothFn> random_tuple(Rng& rng, int size, const FamilyParams& params = {});

struct CanonicalParams {
  int max_degree = 2;
  double coeff_bound = 1.0;
  bool linear = false;
};

/// Canonical operator of order n with random polynomial coefficients.
Operator random_canonical(Rng& rng, int n, const Domain& domain, const CanonicalParams& params = {});

}  // namespace hodiff
