#pragma once

#include <span>
#include <vector>

namespace hodiff {

inline constexpr int kMaxOrder = 12;

/// Value and derivatives of a function at a base point.
///
/// Entries are raw derivatives: `jet[i]` is f^(i)(x0), not the Taylor
/// coefficient f^(i)(x0)/i!. A Jet never holds NaN or infinity; the
/// constructor throws NumericError instead.
class Jet {
 public:
  Jet(double x0, std::vector<double> derivs);

  static Jet constant(double x0, int order, double c);
  /// Jet of the identity function x -> x.
  static Jet variable(double x0, int order);
  static Jet zero(double x0, int order) { return constant(x0, order, 0.0); }

  double x0() const noexcept { return x0_; }
  int order() const noexcept { return static_cast<int>(derivs_.size()) - 1; }
  double value() const noexcept { return derivs_.front(); }
  double operator[](int i) const { return derivs_[static_cast<std::size_t>(i)]; }
  std::span<const double> derivs() const noexcept { return derivs_; }

  /// Leading `order + 1` entries.
  Jet truncated(int order) const;

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  double x0_;
  std::vector<double> derivs_;
};

double binomial(int n, int k);
double factorial(int n);

Jet linear_combine(double a, const Jet& j1, double b, const Jet& j2);
Jet scale(double a, const Jet& j);
Jet negate(const Jet& j);
Jet sum(const Jet& j1, const Jet& j2);
Jet difference(const Jet& j1, const Jet& j2);

/// Binomial convolution: (fg)^(k) = sum_j C(k,j) f^(j) g^(k-j).
Jet product(const Jet& j1, const Jet& j2);
Jet quotient(const Jet& num, const Jet& den);

Jet exp(const Jet& j);
/// Jet of ln|f|. Throws DomainError when f(x0) == 0.
Jet ln_abs(const Jet& j);
Jet sin(const Jet& j);
Jet cos(const Jet& j);
/// Jet of |f|; only the sign of f(x0) matters unless f(x0) == 0 and order > 0.
Jet abs(const Jet& j);
/// f^p. Nonnegative integer p is evaluated by repeated products and admits
/// f(x0) == 0; other exponents need f(x0) > 0.
Jet power(const Jet& j, double p);

}  // namespace hodiff
