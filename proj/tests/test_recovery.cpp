#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hodiff/error.hpp"
#include "hodiff/recovery.hpp"
#include "hodiff/sampling.hpp"
#include "test_support.hpp"

using namespace hodiff;

TEST_CASE("linear solver") {
  const auto x = solve_linear({2, 1, 1, 3}, {3, 5});
  CHECK(x[0] == doctest::Approx(0.8));
  CHECK(x[1] == doctest::Approx(1.4));
  // needs a row swap
  const auto y = solve_linear({0, 1, 1, 0}, {2, 3});
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 2.0);
  CHECK_THROWS_AS(solve_linear({1, 2, 2, 4}, {1, 2}), RecoveryError);
  CHECK(condition_1norm({1, 0, 0, 1}, 2) == doctest::Approx(1.0));
  CHECK(default_probes(4) == std::vector<double>{1, -1, 2, -2});
}

TEST_CASE("single point examples") {
  const PointRecovery ddx = recover_at_point(make_derivative(1), 1, 0.3);
  CHECK(ddx.c[0] == doctest::Approx(1.0));
  CHECK(ddx.d[0] == doctest::Approx(0.0));
  const PointRecovery km = recover_at_point(builtin::km_entropy(), 1, 0.3);
  CHECK(km.c[0] == doctest::Approx(0.0));
  CHECK(km.d[0] == doctest::Approx(1.0));

  const Operator D = make_canonical({fn_constant(1), fn_identity()}, {fn_constant(0), fn_constant(2)});
  const std::vector<double> probes{1, -1};
  const PointRecovery r = recover_at_point(D, 2, 0.5, probes, probes);
  CHECK(std::abs(r.c[0] - 1.0) <= 1e-8);
  CHECK(std::abs(r.c[1] - 0.5) <= 1e-8);
  CHECK(std::abs(r.d[0]) <= 1e-8);
  CHECK(std::abs(r.d[1] - 2.0) <= 1e-8);
  CHECK(r.warnings.empty());
}

TEST_CASE("duplicate probes are rejected with a condition estimate") {
  const std::vector<double> dup{1, 1};
  const std::vector<double> ok{1, -1};
  try {
    recover_at_point(make_derivative(2), 2, 0.0, dup, ok);
    FAIL("expected RecoveryError");
  } catch (const RecoveryError& e) {
    CHECK((std::isinf(e.condition()) || e.condition() > kConditionWarning));
  }
  CHECK_THROWS_AS(recover_at_point(make_derivative(2), 2, 0.0, std::vector<double>{1}, ok), StructuralError);
}

TEST_CASE("profile of a varying coefficient") {
  const Domain dom = Domain::interval(-2, 2);
  const Operator D = make_linear({fn_from_text("sin(x)")}, dom);
  const auto grid = dom.grid(21);
  const CoefficientProfile p = recover_profile(D, 1, grid);
  REQUIRE(p.rows.size() == 21);
  CHECK(p.failures() == 0);
  for (const auto& row : p.rows) CHECK(std::abs(row.result->c[0] - std::sin(row.x)) <= 1e-7);
  CHECK(p.max_adjacent_jump > 0.0);

  const std::vector<double> one{0.25};
  CHECK(recover_profile(D, 1, one).rows.size() == 1);
}

TEST_CASE("round trip on random canonical operators") {
  std::mt19937_64 rng(71);
  const Domain dom = Domain::interval(-2, 2);
  const auto grid = dom.grid(9);
  const std::vector<SmoothFn> holdout{fn_from_text("sin(x)"), fn_from_text("x^3"), fn_from_text("x*exp(x)")};
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const Operator D = random_canonical(rng, n, dom);
    const CanonicalOp& truth = *D.canonical();
    const CoefficientProfile p = recover_profile(D, n, grid);
    REQUIRE(p.failures() == 0);
    for (const auto& row : p.rows) {
      for (int i = 0; i < n; ++i) {
        const double c = truth.c[static_cast<std::size_t>(i)].value(row.x);
        const double d = truth.d[static_cast<std::size_t>(i)].value(row.x);
        CHECK(std::abs(row.result->c[static_cast<std::size_t>(i)] - c) <= 1e-6 * std::max(1.0, std::abs(c)));
        CHECK(std::abs(row.result->d[static_cast<std::size_t>(i)] - d) <= 1e-6 * std::max(1.0, std::abs(d)));
      }
    }
    CHECK(validate_recovery(D, p, holdout).pass);
  }
}

TEST_CASE("recovered coefficients do not depend on the probes") {
  std::mt19937_64 rng(72);
  const Domain dom = Domain::interval(-2, 2);
  for (int n = 1; n <= 3; ++n) {
    const Operator D = random_canonical(rng, n, dom);
    const PointRecovery a = recover_at_point(D, n, 0.7);
    std::vector<double> alt;
    for (int i = 0; i < n; ++i) alt.push_back(0.5 + 0.75 * i);
    const PointRecovery b = recover_at_point(D, n, 0.7, alt, alt);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      CHECK(close_rel(a.c[k], b.c[k], 1e-6));
      CHECK(close_rel(a.d[k], b.d[k], 1e-6));
    }
  }
}

TEST_CASE("over-determined probe sets") {
  const Operator D = make_canonical({fn_constant(0.5), fn_constant(-1)}, {fn_constant(3), fn_constant(0)});
  const std::vector<double> probes{1, -1, 2, -2, 0.5};
  const PointRecovery r = recover_at_point(D, 2, 0.0, probes, probes);
  CHECK(r.c[0] == doctest::Approx(0.5));
  CHECK(r.c[1] == doctest::Approx(-1.0));
  CHECK(r.d[0] == doctest::Approx(3.0));
  CHECK(std::abs(r.d[1]) <= 1e-9);
}

TEST_CASE("recovered operator respects units") {
  std::mt19937_64 rng(73);
  const Domain dom = Domain::interval(-2, 2);
  const Operator D = random_canonical(rng, 3, dom);
  const PointRecovery r = recover_at_point(D, 3, -0.4);
  const Operator back = make_canonical(
      {fn_constant(r.c[0]), fn_constant(r.c[1]), fn_constant(r.c[2])},
      {fn_constant(r.d[0]), fn_constant(r.d[1]), fn_constant(r.d[2])});
  CHECK(back(fn_constant(1), -0.4) == 0.0);
  CHECK(back(fn_constant(-1), -0.4) == 0.0);
}

TEST_CASE("validation flags operators outside the canonical class") {
  const Domain dom = Domain::interval(-2, 2);
  const auto grid = dom.grid(11);
  const std::vector<SmoothFn> holdout{fn_from_text("sin(x)"), fn_from_text("x^3"), fn_from_text("x*exp(x)")};
  const Operator sq = builtin::square(dom);
  const CoefficientProfile p = recover_profile(sq, 1, grid);
  CHECK_FALSE(validate_recovery(sq, p, holdout).pass);

  const ResidualReport vac = validate_recovery(sq, p, {});
  CHECK(vac.pass);
  CHECK(vac.vacuous);
}

TEST_CASE("parallel profile matches the serial reference") {
  std::mt19937_64 rng(74);
  const Domain dom = Domain::interval(-2, 2);
  const Operator D = random_canonical(rng, 3, dom);
  const auto grid = dom.grid(15);
  const CoefficientProfile a = recover_profile_serial(D, 3, grid);
  const CoefficientProfile b = recover_profile(D, 3, grid, {}, 2);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].result->c == b.rows[i].result->c);
    CHECK(a.rows[i].result->d == b.rows[i].result->d);
  }
  CHECK(a.max_adjacent_jump == b.max_adjacent_jump);
}
