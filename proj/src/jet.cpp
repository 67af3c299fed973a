#include "hodiff/jet.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hodiff/error.hpp"

namespace hodiff {
namespace {

constexpr int kTableSize = kMaxOrder + 1;

struct Tables {
  std::array<std::array<double, kTableSize>, kTableSize> binom{};
  std::array<double, kTableSize> fact{};

  Tables() {
    for (int n = 0; n < kTableSize; ++n) {
      binom[n][0] = binom[n][n] = 1.0;
      for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
    }
    fact[0] = 1.0;
    for (int n = 1; n < kTableSize; ++n) fact[n] = fact[n - 1] * n;
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

void require_compatible(const Jet& a, const Jet& b, const char* op) {
  if (a.x0() != b.x0() || a.order() != b.order()) {
    throw StructuralError(std::string(op) + ": jets differ in base point or order");
  }
}

// Raw derivatives <-> Taylor coefficients f^(k)/k!.
std::vector<double> to_taylor(const Jet& j) {
  const auto& t = tables();
  std::vector<double> out(j.derivs().begin(), j.derivs().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= t.fact[k];
  return out;
}

Jet from_taylor(double x0, std::vector<double> coeffs) {
  const auto& t = tables();
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= t.fact[k];
  return Jet(x0, std::move(coeffs));
}

}  // namespace

Jet::Jet(double x0, std::vector<double> derivs) : x0_(x0), derivs_(std::move(derivs)) {
  if (derivs_.empty()) throw StructuralError("jet needs at least one entry");
  if (order() > kMaxOrder) {
    throw StructuralError("jet order " + std::to_string(order()) + " exceeds maximum " +
                          std::to_string(kMaxOrder));
  }
  if (!std::isfinite(x0_)) throw NumericError("jet base point is not finite");
  for (std::size_t i = 0; i < derivs_.size(); ++i) {
    if (!std::isfinite(derivs_[i])) {
      throw NumericError("non-finite jet entry " + std::to_string(i) + " at x0=" +
                         std::to_string(x0_));
    }
  }
}

Jet Jet::constant(double x0, int order, double c) {
  if (order < 0) throw StructuralError("negative jet order");
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  d[0] = c;
  return Jet(x0, std::move(d));
}

Jet Jet::variable(double x0, int order) {
  if (order < 0) throw StructuralError("negative jet order");
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  d[0] = x0;
  if (order >= 1) d[1] = 1.0;
  return Jet(x0, std::move(d));
}

Jet Jet::truncated(int order) const {
  if (order < 0 || order > this->order()) throw StructuralError("truncation order out of range");
  return Jet(x0_, std::vector<double>(derivs_.begin(), derivs_.begin() + order + 1));
}

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n < kTableSize) return tables().binom[n][k];
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double factorial(int n) {
  if (n < 0) throw StructuralError("factorial of negative number");
  if (n < kTableSize) return tables().fact[n];
  return std::tgamma(n + 1.0);
}

Jet linear_combine(double a, const Jet& j1, double b, const Jet& j2) {
  require_compatible(j1, j2, "linear_combine");
  std::vector<double> d(j1.derivs().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a * j1.derivs()[i] + b * j2.derivs()[i];
  return Jet(j1.x0(), std::move(d));
}

Jet scale(double a, const Jet& j) {
  std::vector<double> d(j.derivs().begin(), j.derivs().end());
  for (auto& v : d) v *= a;
  return Jet(j.x0(), std::move(d));
}

Jet negate(const Jet& j) { return scale(-1.0, j); }
Jet sum(const Jet& j1, const Jet& j2) { return linear_combine(1.0, j1, 1.0, j2); }
Jet difference(const Jet& j1, const Jet& j2) { return linear_combine(1.0, j1, -1.0, j2); }

Jet product(const Jet& j1, const Jet& j2) {
  require_compatible(j1, j2, "product");
  const int order = j1.order();
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    // Terms j and k-j are paired so that swapping the operands is bitwise exact.
    double acc = 0.0;
    for (int j = 0; 2 * j < k; ++j) acc += binomial(k, j) * (j1[j] * j2[k - j] + j1[k - j] * j2[j]);
    if (k % 2 == 0) acc += binomial(k, k / 2) * (j1[k / 2] * j2[k / 2]);
    d[k] = acc;
  }
  return Jet(j1.x0(), std::move(d));
}

Jet quotient(const Jet& num, const Jet& den) {
  require_compatible(num, den, "quotient");
  if (den.value() == 0.0) throw DomainError("division by zero at x0=" + std::to_string(den.x0()));
  const auto a = to_taylor(num);
  const auto b = to_taylor(den);
  std::vector<double> q(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return from_taylor(num.x0(), std::move(q));
}

Jet exp(const Jet& j) {
  const auto g = to_taylor(j);
  std::vector<double> e(g.size());
  e[0] = std::exp(g[0]);
  if (!std::isfinite(e[0])) {
    throw NumericError("exp overflow: exp(" + std::to_string(g[0]) + ")");
  }
  // e' = g' e
  for (std::size_t k = 1; k < g.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) acc += static_cast<double>(i) * g[i] * e[k - i];
    e[k] = acc / static_cast<double>(k);
  }
  return from_taylor(j.x0(), std::move(e));
}

Jet ln_abs(const Jet& j) {
  if (j.value() == 0.0) {
    throw DomainError("log singularity at base point x0=" + std::to_string(j.x0()));
  }
  const auto f = to_taylor(j);
  std::vector<double> l(f.size());
  l[0] = std::log(std::abs(f[0]));
  // f l' = f'
  for (std::size_t k = 1; k < f.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i < k; ++i) acc += static_cast<double>(i) * l[i] * f[k - i];
    l[k] = (f[k] - acc / static_cast<double>(k)) / f[0];
  }
  return from_taylor(j.x0(), std::move(l));
}

namespace {

void sin_cos(const Jet& j, std::vector<double>& s, std::vector<double>& c) {
  const auto g = to_taylor(j);
  s.assign(g.size(), 0.0);
  c.assign(g.size(), 0.0);
  s[0] = std::sin(g[0]);
  c[0] = std::cos(g[0]);
  for (std::size_t k = 1; k < g.size(); ++k) {
    double as = 0.0;
    double ac = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      as += static_cast<double>(i) * g[i] * c[k - i];
      ac -= static_cast<double>(i) * g[i] * s[k - i];
    }
    s[k] = as / static_cast<double>(k);
    c[k] = ac / static_cast<double>(k);
  }
}

}  // namespace

Jet sin(const Jet& j) {
  std::vector<double> s, c;
  sin_cos(j, s, c);
  return from_taylor(j.x0(), std::move(s));
}

Jet cos(const Jet& j) {
  std::vector<double> s, c;
  sin_cos(j, s, c);
  return from_taylor(j.x0(), std::move(c));
}

Jet abs(const Jet& j) {
  if (j.value() > 0.0) return j;
  if (j.value() < 0.0) return negate(j);
  if (j.order() == 0) return j;
  throw DomainError("abs is not differentiable at x0=" + std::to_string(j.x0()));
}

Jet power(const Jet& j, double p) {
  if (p >= 0.0 && p == std::floor(p) && p <= 64.0) {
    auto n = static_cast<int>(p);
    Jet result = Jet::constant(j.x0(), j.order(), 1.0);
    Jet base = j;
    while (n > 0) {
      if (n & 1) result = product(result, base);
      n >>= 1;
      if (n > 0) base = product(base, base);
    }
    return result;
  }
  if (j.value() <= 0.0) {
    throw DomainError("non-integer power of nonpositive value at x0=" + std::to_string(j.x0()));
  }
  const auto f = to_taylor(j);
  std::vector<double> h(f.size());
  h[0] = std::pow(f[0], p);
  if (!std::isfinite(h[0])) throw NumericError("power overflow");
  // f h' = p f' h
  for (std::size_t k = 1; k < f.size(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += (p * static_cast<double>(i) - static_cast<double>(k - i)) * f[i] * h[k - i];
    }
    h[k] = acc / (static_cast<double>(k) * f[0]);
  }
  return from_taylor(j.x0(), std::move(h));
}

}  // namespace hodiff
