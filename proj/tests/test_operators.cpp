#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hodiff/error.hpp"
#include "hodiff/operators.hpp"
#include "hodiff/sampling.hpp"
#include "test_support.hpp"

using namespace hodiff;

TEST_CASE("canonical operators apply their formula") {
  const Operator ddx = make_derivative(1);
  CHECK(ddx(fn_from_text("x^2"), 3.0) == 6.0);

  const Operator d2 = make_derivative(2);
  CHECK(d2(fn_from_text("sin(x)"), std::numbers::pi / 2) == doctest::Approx(-1.0).epsilon(1e-15));

  const Operator ent = make_entropy();
  CHECK(ent(fn_identity(), 0.0) == 0.0);
  CHECK(ent(fn_identity(), std::numbers::e) == doctest::Approx(std::numbers::e));
  CHECK(ent(fn_constant(-std::numbers::e), 0.0) == doctest::Approx(-std::numbers::e));

  // x f' + 2 f (ln|f|)^2 on f = e^x at x = 1: e + 2e
  const Operator mixed =
      make_canonical({fn_identity(), fn_constant(0)}, {fn_constant(0), fn_constant(2)});
  CHECK(mixed(fn_from_text("exp(x)"), 1.0) == doctest::Approx(3 * std::numbers::e));
}

TEST_CASE("canonical_value follows the 0 ln 0 convention") {
  const std::vector<double> c{1.0};
  const std::vector<double> d{5.0};
  CHECK(canonical_value(c, d, Jet(0.0, {0.0, 2.0})) == 2.0);
}

TEST_CASE("operators vanish on constants") {
  std::mt19937_64 rng(31);
  const Domain dom = Domain::interval(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const Operator D = random_canonical(rng, 1 + trial % 4, dom);
    for (double x : dom.grid(9)) {
      CHECK(D(fn_constant(1), x) == 0.0);
      CHECK(D(fn_constant(-1), x) == 0.0);
    }
  }
}

TEST_CASE("linear forms are linear") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2, 2);
  const Domain dom = Domain::interval(-2, 2);
  CanonicalParams params;
  params.linear = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Operator D = random_canonical(rng, 1 + trial % 4, dom, params);
    REQUIRE(D.canonical() != nullptr);
    CHECK(is_linear_form(*D.canonical()));
    const SmoothFn f = random_function(rng);
    const SmoothFn g = random_function(rng);
    const double a = u(rng), b = u(rng), x = u(rng);
    const double lhs = D(fn_scale_add(a, f, b, g), x);
    const double rhs = a * D(f, x) + b * D(g, x);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max({1.0, std::abs(a * D(f, x)), std::abs(b * D(g, x))}));
  }
}

TEST_CASE("canonical operators are odd") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.9, 1.9);
  const Domain dom = Domain::interval(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const Operator D = random_canonical(rng, 1 + trial % 4, dom);
    const SmoothFn f = random_function(rng);
    const double x = u(rng);
    const double v = D(f, x);
    CHECK(std::abs(D(fn_scale_add(-1, f, 0, f), x) + v) <= 1e-12 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("is_linear_form") {
  CHECK(is_linear_form(*make_derivative(3).canonical()));
  CHECK_FALSE(is_linear_form(*make_entropy().canonical()));
  CHECK(builtin::square().canonical() == nullptr);
}

TEST_CASE("domain and numeric errors") {
  const Operator D = make_derivative(1, 1.0, Domain::interval(0, 1));
  CHECK(D(fn_identity(), 0.5) == 1.0);
  CHECK_THROWS_AS(D(fn_identity(), 1.0), DomainError);
  CHECK_THROWS_AS(D(fn_identity(), -3.0), DomainError);
  CHECK_THROWS_AS(make_derivative(0), StructuralError);
  const Operator blowup(BlackBoxOp{[](const SmoothFn&, double) { return std::nan(""); }, "nan"});
  CHECK_THROWS_AS(blowup(fn_identity(), 0.0), NumericError);
}

TEST_CASE("builtin black boxes") {
  CHECK(builtin::square()(fn_from_text("x + 1"), 1.0) == 4.0);
  CHECK(builtin::translate(1.0)(fn_from_text("x^2"), 2.0) == 9.0);
  CHECK(builtin::third_derivative()(fn_from_text("x^3"), 5.0) == 6.0);
  CHECK(builtin::km_entropy()(fn_identity(), 0.0) == 0.0);
  CHECK(builtin::km_entropy()(fn_constant(std::numbers::e), 0.0) == doctest::Approx(std::numbers::e));
}
