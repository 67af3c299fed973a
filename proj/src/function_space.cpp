#include "hodiff/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hodiff/error.hpp"

namespace hodiff {

Domain::Domain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw StructuralError("domain needs at least one interval");
  for (const auto& iv : intervals_) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw StructuralError("domain interval needs lo < hi");
    }
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].lo < intervals_[i - 1].hi) {
      throw StructuralError("domain intervals overlap");
    }
  }
}

Domain Domain::real_line() {
  const double inf = std::numeric_limits<double>::infinity();
  return Domain({{-inf, inf}});
}

bool Domain::contains(double x) const noexcept {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.contains(x); });
}

std::vector<double> Domain::grid(int points) const {
  if (points < 0) throw StructuralError("negative grid size");
  std::vector<double> out;
  for (const auto& iv : intervals_) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw StructuralError("cannot grid an unbounded interval");
    }
    for (int i = 0; i < points; ++i) {
      out.push_back(iv.lo + iv.width() * (i + 1) / (points + 1));
    }
  }
  return out;
}

std::string Domain::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) os << " u ";
    os << '(' << intervals_[i].lo << ", " << intervals_[i].hi << ')';
  }
  return os.str();
}

SmoothFn::SmoothFn(Evaluator eval, std::string descriptor, bool known_zero)
    : impl_(std::make_shared<const Impl>(Impl{std::move(eval), std::move(descriptor), known_zero})) {}

namespace {

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SmoothFn fn_constant(double c) {
  return SmoothFn([c](double x0, int order) { return Jet::constant(x0, order, c); },
                  number_text(c), c == 0.0);
}

SmoothFn fn_identity() {
  return SmoothFn([](double x0, int order) { return Jet::variable(x0, order); }, "x");
}

SmoothFn fn_polynomial(std::vector<double> coeffs) {
  std::ostringstream desc;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    if (!first) desc << " + ";
    first = false;
    desc << number_text(coeffs[i]);
    if (i >= 1) desc << "*x";
    if (i >= 2) desc << '^' << i;
  }
  if (first) desc << '0';
  const bool zero = first;
  return SmoothFn(
      [c = std::move(coeffs)](double x0, int order) {
        // d^k/dx^k sum c_i x^i = sum_{i>=k} c_i i!/(i-k)! x^(i-k), by Horner per k.
        std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
        const int deg = static_cast<int>(c.size()) - 1;
        for (int k = 0; k <= order && k <= deg; ++k) {
          double acc = 0.0;
          for (int i = deg; i >= k; --i) {
            double falling = 1.0;
            for (int t = 0; t < k; ++t) falling *= (i - t);
            acc = acc * x0 + c[static_cast<std::size_t>(i)] * falling;
          }
          d[static_cast<std::size_t>(k)] = acc;
        }
        return Jet(x0, std::move(d));
      },
      desc.str(), zero);
}

SmoothFn fn_monomial(int degree) {
  if (degree < 0) throw StructuralError("negative monomial degree");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = 1.0;
  return fn_polynomial(std::move(c));
}

SmoothFn fn_from_expr(const Expr& e) {
  return SmoothFn([e](double x0, int order) { return eval_jet(e, x0, order); }, to_string(e),
                  is_zero_constant(e));
}

SmoothFn fn_from_text(std::string_view text) { return fn_from_expr(parse(text)); }

SmoothFn fn_from_jet(double x0, std::vector<double> v) {
  if (v.empty()) v.push_back(0.0);
  std::ostringstream desc;
  desc << "taylor@" << number_text(x0) << '[';
  for (std::size_t i = 0; i < v.size(); ++i) desc << (i ? "," : "") << number_text(v[i]);
  desc << ']';
  const bool zero = std::all_of(v.begin(), v.end(), [](double a) { return a == 0.0; });
  return SmoothFn(
      [c = x0, v = std::move(v)](double x, int order) {
        // derivative k of sum_l v[l] (x-c)^l / l!  =  sum_{l>=k} v[l] (x-c)^(l-k) / (l-k)!
        const double t = x - c;
        std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
        const int top = static_cast<int>(v.size()) - 1;
        for (int k = 0; k <= order && k <= top; ++k) {
          double acc = 0.0;
          for (int l = top; l >= k; --l) acc = acc * t / (l - k + 1) + v[static_cast<std::size_t>(l)];
          d[static_cast<std::size_t>(k)] = acc;
        }
        return Jet(x, std::move(d));
      },
      desc.str(), zero);
}

SmoothFn fn_product(std::span<const SmoothFn> fs) {
  if (fs.empty()) throw StructuralError("product of an empty list");
  std::vector<SmoothFn> factors(fs.begin(), fs.end());
  std::string desc;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) desc += " * ";
    desc += '(' + factors[i].descriptor() + ')';
  }
  const bool zero = std::any_of(factors.begin(), factors.end(),
                                [](const SmoothFn& f) { return f.is_known_zero(); });
  return SmoothFn(
      [factors = std::move(factors)](double x0, int order) {
        Jet acc = factors.front().jet(x0, order);
        for (std::size_t i = 1; i < factors.size(); ++i) acc = product(acc, factors[i].jet(x0, order));
        return acc;
      },
      std::move(desc), zero);
}

SmoothFn fn_product(std::initializer_list<SmoothFn> fs) {
  return fn_product(std::span<const SmoothFn>(fs.begin(), fs.size()));
}

SmoothFn fn_exp_of(const SmoothFn& g) {
  return SmoothFn([g](double x0, int order) { return exp(g.jet(x0, order)); },
                  "exp(" + g.descriptor() + ")");
}

SmoothFn fn_scale_add(double a, const SmoothFn& f, double b, const SmoothFn& g) {
  const bool zero = (a == 0.0 || f.is_known_zero()) && (b == 0.0 || g.is_known_zero());
  return SmoothFn(
      [a, f, b, g](double x0, int order) {
        return linear_combine(a, f.jet(x0, order), b, g.jet(x0, order));
      },
      number_text(a) + "*(" + f.descriptor() + ") + " + number_text(b) + "*(" + g.descriptor() +
          ")",
      zero);
}

SmoothFn fn_sum(std::span<const SmoothFn> fs) {
  if (fs.empty()) return fn_constant(0.0);
  std::vector<SmoothFn> terms(fs.begin(), fs.end());
  std::string desc;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) desc += " + ";
    desc += '(' + terms[i].descriptor() + ')';
  }
  const bool zero = std::all_of(terms.begin(), terms.end(),
                                [](const SmoothFn& f) { return f.is_known_zero(); });
  return SmoothFn(
      [terms = std::move(terms)](double x0, int order) {
        Jet acc = terms.front().jet(x0, order);
        for (std::size_t i = 1; i < terms.size(); ++i) acc = sum(acc, terms[i].jet(x0, order));
        return acc;
      },
      std::move(desc), zero);
}

SmoothFn fn_power(const SmoothFn& f, int m) {
  if (m < 0) throw StructuralError("negative power");
  if (m == 0) return fn_constant(1.0);
  std::vector<SmoothFn> copies(static_cast<std::size_t>(m), f);
  return fn_product(copies);
}

namespace {

// exp(-1/t) for t > 0, else 0. Below t = 1/700 the value and every derivative
// up to kMaxOrder underflow, so the zero jet is returned directly.
Jet flat_ramp(const Jet& t) {
  if (!(t.value() > 0.0) || 1.0 / t.value() > 700.0) return Jet::zero(t.x0(), t.order());
  return exp(negate(quotient(Jet::constant(t.x0(), t.order(), 1.0), t)));
}

// 0 for t <= 0, 1 for t >= 1, smooth in between.
Jet smooth_step(const Jet& t) {
  if (t.value() <= 0.0) return Jet::zero(t.x0(), t.order());
  if (t.value() >= 1.0) return Jet::constant(t.x0(), t.order(), 1.0);
  const Jet one = Jet::constant(t.x0(), t.order(), 1.0);
  const Jet a = flat_ramp(t);
  const Jet b = flat_ramp(difference(one, t));
  return quotient(a, sum(a, b));
}

}  // namespace

SmoothFn fn_bump(Interval support, Interval plateau) {
  if (!(support.lo < plateau.lo && plateau.lo <= plateau.hi && plateau.hi < support.hi) ||
      !std::isfinite(support.lo) || !std::isfinite(support.hi)) {
    throw StructuralError("bump plateau must lie strictly inside a bounded support");
  }
  std::ostringstream desc;
  desc << "bump(" << number_text(support.lo) << ',' << number_text(plateau.lo) << ','
       << number_text(plateau.hi) << ',' << number_text(support.hi) << ')';
  return SmoothFn(
      [support, plateau](double x0, int order) {
        if (!support.contains(x0)) return Jet::zero(x0, order);
        if (plateau.lo <= x0 && x0 <= plateau.hi) return Jet::constant(x0, order, 1.0);
        const Jet x = Jet::variable(x0, order);
        const double wl = plateau.lo - support.lo;
        const double wr = support.hi - plateau.hi;
        // t_left = (x - a)/(p - a), t_right = (b - x)/(b - q)
        const Jet tl = linear_combine(1.0 / wl, x, -support.lo / wl, Jet::constant(x0, order, 1.0));
        const Jet tr = linear_combine(-1.0 / wr, x, support.hi / wr, Jet::constant(x0, order, 1.0));
        return product(smooth_step(tl), smooth_step(tr));
      },
      desc.str());
}

}  // namespace hodiff
