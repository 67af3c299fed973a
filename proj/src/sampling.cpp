#include "hodiff/sampling.hpp"

namespace hodiff {

std::vector<double> random_coefficients(Rng& rng, int degree, double bound) {
  std::uniform_real_distribution<double> coeff(-bound, bound);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = coeff(rng);
  return c;
}

SmoothFn random_function(Rng& rng, const FamilyParams& params) {
  FunctionFamily family = params.family;
  if (family == FunctionFamily::Mixed) {
    std::uniform_int_distribution<int> pick(0, 2);
    family = static_cast<FunctionFamily>(pick(rng));
  }
  std::uniform_int_distribution<int> degree(0, params.max_degree);
  switch (family) {
    case FunctionFamily::Polynomial:
      return fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound));
    case FunctionFamily::Exponential:
      return fn_exp_of(fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound)));
    default: {
      auto p = fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound));
      auto q = fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound));
      return fn_product({p, fn_exp_of(q)});
    }
  }
}

std::vector<SmoothFn> random_tuple(Rng& rng, int size, const FamilyParams& params) {
  std::vector<SmoothFn> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) out.push_back(random_function(rng, params));
  return out;
}

Operator random_canonical(Rng& rng, int n, const Domain& domain, const CanonicalParams& params) {
  std::uniform_int_distribution<int> degree(0, params.max_degree);
  std::vector<SmoothFn> c;
  std::vector<SmoothFn> d;
  for (int i = 0; i < n; ++i) {
    c.push_back(fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound)));
  }
  for (int i = 0; i < n; ++i) {
    d.push_back(params.linear
                    ? fn_constant(0.0)
                    : fn_polynomial(random_coefficients(rng, degree(rng), params.coeff_bound)));
  }
  return make_canonical(std::move(c), std::move(d), domain);
}

}  // namespace hodiff
