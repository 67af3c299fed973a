#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hodiff/expr.hpp"
#include "hodiff/jet.hpp"

namespace hodiff {

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return lo < x && x < hi; }
  double width() const noexcept { return hi - lo; }
};

/// A nonempty finite union of pairwise disjoint open intervals.
class Domain {
 public:
  explicit Domain(std::vector<Interval> intervals);
  static Domain real_line();
  static Domain interval(double lo, double hi) { return Domain({{lo, hi}}); }

  /// Strict interior membership; endpoints are outside.
  bool contains(double x) const noexcept;
  std::span<const Interval> intervals() const noexcept { return intervals_; }

  /// `points` equally spaced interior points of each bounded interval.
  std::vector<double> grid(int points) const;

  std::string describe() const;

 private:
  std::vector<Interval> intervals_;
};

/// A jet-evaluable real function. Immutable and cheap to copy.
class SmoothFn {
 public:
  using Evaluator = std::function<Jet(double x0, int order)>;

  SmoothFn(Evaluator eval, std::string descriptor, bool known_zero = false);

  Jet jet(double x0, int order) const { return impl_->eval(x0, order); }
  double value(double x) const { return jet(x, 0).value(); }
  const std::string& descriptor() const noexcept { return impl_->descriptor; }
  /// True only when the function was built as the literal zero.
  bool is_known_zero() const noexcept { return impl_->known_zero; }

 private:
  struct Impl {
    Evaluator eval;
    std::string descriptor;
    bool known_zero;
  };
  std::shared_ptr<const Impl> impl_;
};

SmoothFn fn_constant(double c);
SmoothFn fn_identity();
/// sum_i coeffs[i] * x^i
SmoothFn fn_polynomial(std::vector<double> coeffs);
SmoothFn fn_monomial(int degree);
SmoothFn fn_from_expr(const Expr& e);
SmoothFn fn_from_text(std::string_view text);
/// Taylor polynomial sum_l v[l] (x - x0)^l / l!, whose jet at x0 is exactly v.
SmoothFn fn_from_jet(double x0, std::vector<double> v);

/// Iterated jet product of the factors. Throws StructuralError when empty.
SmoothFn fn_product(std::span<const SmoothFn> fs);
SmoothFn fn_product(std::initializer_list<SmoothFn> fs);
SmoothFn fn_exp_of(const SmoothFn& g);
/// a*f + b*g
SmoothFn fn_scale_add(double a, const SmoothFn& f, double b, const SmoothFn& g);
SmoothFn fn_sum(std::span<const SmoothFn> fs);
/// f^m as an m-fold product; m == 0 gives the constant 1.
SmoothFn fn_power(const SmoothFn& f, int m);

/// C-infinity bump: 1 on `plateau`, 0 outside `support`, values in [0,1].
/// Requires support.lo < plateau.lo <= plateau.hi < support.hi.
SmoothFn fn_bump(Interval support, Interval plateau);

}  // namespace hodiff
