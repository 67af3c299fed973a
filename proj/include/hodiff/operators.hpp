#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hodiff/function_space.hpp"

namespace hodiff {

/// D(f) = sum_i c_i f^(i) + sum_i d_i f (ln|f|)^i for i = 1..n, with the
/// log terms taken as 0 where f(x) = 0.
///
/// All d_i = 0 gives a linear differential operator; additionally c_1..c_j = 0
/// gives an operator annihilating polynomials of degree <= j. For n = 1 this
/// is the derivation-plus-entropy family c f' + d f ln|f|.
struct CanonicalOp {
  int n = 1;
  std::vector<SmoothFn> c;
  std::vector<SmoothFn> d;
};

/// Opaque pointwise map (f, x) -> D(f)(x).
struct BlackBoxOp {
  std::function<double(const SmoothFn&, double)> eval;
  std::string descriptor;
};

/// Canonical value from coefficient samples and the jet of f at x (order >= n).
double canonical_value(std::span<const double> c, std::span<const double> d, const Jet& fjet);

class Operator {
 public:
  Operator(CanonicalOp op, Domain domain = Domain::real_line());
  Operator(BlackBoxOp op, Domain domain = Domain::real_line());

  /// Throws DomainError when x is outside the domain, NumericError on a
  /// non-finite result.
  double apply(const SmoothFn& f, double x) const;
  double operator()(const SmoothFn& f, double x) const { return apply(f, x); }

  const std::string& descriptor() const noexcept { return impl_->descriptor; }
  const Domain& domain() const noexcept { return impl_->domain; }
  /// Null for black boxes.
  const CanonicalOp* canonical() const noexcept { return std::get_if<CanonicalOp>(&impl_->op); }

 private:
  struct Impl {
    std::variant<CanonicalOp, BlackBoxOp> op;
    Domain domain;
    std::string descriptor;
  };
  std::shared_ptr<const Impl> impl_;
};

/// All d_i are the literal zero function.
bool is_linear_form(const CanonicalOp& op);

Operator make_canonical(std::vector<SmoothFn> c, std::vector<SmoothFn> d,
                        Domain domain = Domain::real_line());
/// Sum_i c_i f^(i) with zero entropy coefficients.
Operator make_linear(std::vector<SmoothFn> c, Domain domain = Domain::real_line());
/// c * d^k/dx^k as a canonical operator of order k.
Operator make_derivative(int k, double c = 1.0, Domain domain = Domain::real_line());
/// f ln|f| scaled by `coeff`: the n = 1 entropy operator.
Operator make_entropy(double coeff = 1.0, Domain domain = Domain::real_line());

namespace builtin {

Operator square(Domain domain = Domain::real_line());
/// f -> f(. + shift); not localized.
Operator translate(double shift, Domain domain = Domain::real_line());
/// Black-box third derivative (treated opaquely, unlike make_derivative(3)).
Operator third_derivative(Domain domain = Domain::real_line());
Operator km_entropy(Domain domain = Domain::real_line());

}  // namespace builtin

}  // namespace hodiff
