#include "hodiff/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hodiff/error.hpp"

namespace hodiff {

namespace {

std::string describe(const CanonicalOp& op) {
  std::string s = "canonical(n=" + std::to_string(op.n) + "; c=[";
  for (std::size_t i = 0; i < op.c.size(); ++i) s += (i ? ", " : "") + op.c[i].descriptor();
  s += "]; d=[";
  for (std::size_t i = 0; i < op.d.size(); ++i) s += (i ? ", " : "") + op.d[i].descriptor();
  return s + "])";
}

void validate(const CanonicalOp& op) {
  if (op.n < 1 || op.n > kMaxOrder) throw StructuralError("canonical operator order out of range");
  if (op.c.size() != static_cast<std::size_t>(op.n) || op.d.size() != static_cast<std::size_t>(op.n)) {
    throw StructuralError("canonical operator needs exactly n c- and n d-coefficients");
  }
}

}  // namespace

double canonical_value(std::span<const double> c, std::span<const double> d, const Jet& fjet) {
  const std::size_t n = c.size();
  if (d.size() != n || fjet.order() < static_cast<int>(n)) {
    throw StructuralError("canonical_value: coefficient count or jet order mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += c[i] * fjet[static_cast<int>(i) + 1];
  const double f = fjet.value();
  if (f != 0.0) {
    const double log_abs = std::log(std::abs(f));
    double log_pow = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      log_pow *= log_abs;
      acc += d[i] * f * log_pow;
    }
  }
  return acc;
}

Operator::Operator(CanonicalOp op, Domain domain) {
  validate(op);
  std::string desc = describe(op);
  impl_ = std::make_shared<const Impl>(Impl{std::move(op), std::move(domain), std::move(desc)});
}

Operator::Operator(BlackBoxOp op, Domain domain) {
  if (!op.eval) throw StructuralError("black-box operator without evaluator");
  std::string desc = op.descriptor;
  impl_ = std::make_shared<const Impl>(Impl{std::move(op), std::move(domain), std::move(desc)});
}

double Operator::apply(const SmoothFn& f, double x) const {
  if (!impl_->domain.contains(x)) {
    std::ostringstream os;
    os << "point " << x << " outside domain " << impl_->domain.describe();
    throw DomainError(os.str());
  }
  double result = 0.0;
  if (const auto* op = std::get_if<CanonicalOp>(&impl_->op)) {
    const Jet fjet = f.jet(x, op->n);
    std::vector<double> c(static_cast<std::size_t>(op->n));
    std::vector<double> d(static_cast<std::size_t>(op->n));
    for (int i = 0; i < op->n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      c[u] = op->c[u].is_known_zero() ? 0.0 : op->c[u].value(x);
      d[u] = op->d[u].is_known_zero() ? 0.0 : op->d[u].value(x);
    }
    result = canonical_value(c, d, fjet);
  } else {
    result = std::get<BlackBoxOp>(impl_->op).eval(f, x);
  }
  if (!std::isfinite(result)) {
    std::ostringstream os;
    os << "non-finite operator value at x=" << x << " for " << impl_->descriptor;
    throw NumericError(os.str());
  }
  return result;
}

bool is_linear_form(const CanonicalOp& op) {
  return std::all_of(op.d.begin(), op.d.end(), [](const SmoothFn& f) { return f.is_known_zero(); });
}

Operator make_canonical(std::vector<SmoothFn> c, std::vector<SmoothFn> d, Domain domain) {
  const int n = static_cast<int>(c.size());
  return Operator(CanonicalOp{n, std::move(c), std::move(d)}, std::move(domain));
}

Operator make_linear(std::vector<SmoothFn> c, Domain domain) {
  std::vector<SmoothFn> d(c.size(), fn_constant(0.0));
  return make_canonical(std::move(c), std::move(d), std::move(domain));
}

Operator make_derivative(int k, double coeff, Domain domain) {
  if (k < 1) throw StructuralError("derivative order must be positive");
  std::vector<SmoothFn> c(static_cast<std::size_t>(k), fn_constant(0.0));
  c.back() = fn_constant(coeff);
  return make_linear(std::move(c), std::move(domain));
}

Operator make_entropy(double coeff, Domain domain) {
  return make_canonical({fn_constant(0.0)}, {fn_constant(coeff)}, std::move(domain));
}

namespace builtin {

Operator square(Domain domain) {
  return Operator(BlackBoxOp{[](const SmoothFn& f, double x) {
                               const double v = f.value(x);
                               return v * v;
                             },
                             "square"},
                  std::move(domain));
}

Operator translate(double shift, Domain domain) {
  std::ostringstream desc;
  desc << "translate(" << shift << ')';
  return Operator(
      BlackBoxOp{[shift](const SmoothFn& f, double x) { return f.value(x + shift); }, desc.str()},
      std::move(domain));
}

Operator third_derivative(Domain domain) {
  return Operator(
      BlackBoxOp{[](const SmoothFn& f, double x) { return f.jet(x, 3)[3]; }, "third-derivative"},
      std::move(domain));
}

Operator km_entropy(Domain domain) {
  return Operator(BlackBoxOp{[](const SmoothFn& f, double x) {
                               const double v = f.value(x);
                               return v == 0.0 ? 0.0 : v * std::log(std::abs(v));
                             },
                             "km-entropy"},
                  std::move(domain));
}

}  // namespace builtin

}  // namespace hodiff
