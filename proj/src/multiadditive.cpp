#include "hodiff/multiadditive.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>

#include "hodiff/error.hpp"
#include "hodiff/identity.hpp"

namespace hodiff {

Operator conjugate_exp(const Operator& D) {
  return Operator(BlackBoxOp{[D](const SmoothFn& g, double x) {
                               const double eg = std::exp(g.value(x));
                               if (!std::isfinite(eg) || eg == 0.0) {
                                 throw NumericError("exp out of range in conjugation");
                               }
                               return D(fn_exp_of(g), x) / eg;
                             },
                             "conjugate_exp(" + D.descriptor() + ")"},
                  D.domain());
}

Residual difference_residual(const Operator& T, const SmoothFn& f, const FnPerturbation& hs,
                             double x) {
  const int m = static_cast<int>(hs.size());
  if (m > 20) throw StructuralError("too many perturbations");
  Residual r;
  std::vector<SmoothFn> terms;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    terms.assign(1, f);
    int size = 0;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        terms.push_back(hs[static_cast<std::size_t>(i)]);
        ++size;
      }
    }
    const double sign = ((m - size) % 2 == 0) ? 1.0 : -1.0;
    const SmoothFn arg = terms.size() == 1 ? f : fn_sum(terms);
    const double term = sign * T(arg, x);
    r.value += term;
    r.scale = std::max(r.scale, std::abs(term));
  }
  return r;
}

Operator iterated_difference(const Operator& T, const FnPerturbation& hs) {
  if (hs.empty()) return T;
  std::string desc = "delta[";
  for (std::size_t i = 0; i < hs.size(); ++i) desc += (i ? ", " : "") + hs[i].descriptor();
  desc += "](" + T.descriptor() + ")";
  return Operator(
      BlackBoxOp{[T, hs](const SmoothFn& f, double x) { return difference_residual(T, f, hs, x).value; },
                 std::move(desc)},
      T.domain());
}

double eval_multiadd_form(const Operator& D, std::span<const SmoothFn> fs, double x) {
  return eval_id_n_residual(D, fs, x);
}

Residual frechet_degree_residual(const Operator& P, const SmoothFn& g, const FnPerturbation& hs,
                                 double x) {
  return difference_residual(P, g, hs, x);
}

double eval_G(const Operator& P, double x, std::span<const double> v) {
  return P(fn_from_jet(x, std::vector<double>(v.begin(), v.end())), x);
}

Residual g_space_difference(const Operator& P, double x, std::span<const double> v,
                            std::span<const std::vector<double>> increments) {
  const int m = static_cast<int>(increments.size());
  if (m > 20) throw StructuralError("too many increments");
  for (const auto& inc : increments) {
    if (inc.size() != v.size()) throw StructuralError("increment length differs from the jet");
  }
  Residual r;
  std::vector<double> point(v.size());
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::copy(v.begin(), v.end(), point.begin());
    int size = 0;
    for (int i = 0; i < m; ++i) {
      if (!(mask & (1u << i))) continue;
      ++size;
      const auto& inc = increments[static_cast<std::size_t>(i)];
      for (std::size_t l = 0; l < point.size(); ++l) point[l] += inc[l];
    }
    const double sign = ((m - size) % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * eval_G(P, x, point);
    r.value += term;
    r.scale = std::max(r.scale, std::abs(term));
  }
  return r;
}

Residual g_space_degree_residual(const Operator& P, double x, std::span<const double> v, int n,
                                 double step) {
  if (n < 0) throw StructuralError("negative degree");
  const int dims = static_cast<int>(v.size());
  if (dims == 0) throw StructuralError("empty jet");
  Residual worst;
  std::vector<int> dirs(static_cast<std::size_t>(n) + 1, 0);
  // Nondecreasing direction sequences enumerate multisets of size n+1.
  std::function<void(int, int)> rec = [&](int pos, int from) {
    if (pos == n + 1) {
      std::vector<std::vector<double>> inc(dirs.size(), std::vector<double>(v.size(), 0.0));
      for (std::size_t i = 0; i < dirs.size(); ++i) inc[i][static_cast<std::size_t>(dirs[i])] = step;
      const Residual r = g_space_difference(P, x, v, inc);
      worst.scale = std::max(worst.scale, r.scale);
      if (std::abs(r.value) > std::abs(worst.value)) worst.value = r.value;
      return;
    }
    for (int d = from; d < dims; ++d) {
      dirs[static_cast<std::size_t>(pos)] = d;
      rec(pos + 1, d);
    }
  };
  rec(0, 0);
  return worst;
}

}  // namespace hodiff
