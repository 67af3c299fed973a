#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hodiff/error.hpp"
#include "hodiff/identity.hpp"
#include "hodiff/sampling.hpp"

using namespace hodiff;

namespace {

SuiteConfig small_suite(std::uint64_t seed, const Domain& dom) {
  SuiteConfig cfg;
  cfg.seed = seed;
  cfg.tuples = 5;
  cfg.grid = dom.grid(7);
  return cfg;
}

}  // namespace

TEST_CASE("id_n on simple cases") {
  const std::vector<SmoothFn> ones{fn_constant(1), fn_constant(1)};
  const std::vector<SmoothFn> xs{fn_identity(), fn_identity()};
  CHECK(eval_id_n_residual(make_derivative(1), xs, 1.0) == 0.0);
  CHECK(eval_id_n_residual(builtin::square(), xs, 1.0) == -1.0);
  CHECK(eval_id_n_residual(make_derivative(1), ones, 0.0) == 0.0);
  CHECK(eval_id_n_residual(make_derivative(2), std::vector<SmoothFn>{fn_identity(), fn_identity(), fn_identity()},
                           0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(eval_id_n_residual(make_derivative(1), std::vector<SmoothFn>{fn_identity()}, 0.0),
                  StructuralError);
}

TEST_CASE("id_single") {
  CHECK(eval_id_single_residual(make_derivative(1), fn_identity(), 2, 1.0) == doctest::Approx(0.0));
  CHECK(eval_id_single_residual(builtin::square(), fn_identity(), 1, 1.0) == -1.0);
  CHECK(eval_id_single_residual(builtin::square(), fn_identity(), 2, 1.0) == 1.0);
  const Residual r = id_single_residual(make_derivative(1), fn_from_text("exp(x)"), 3, 0.2);
  CHECK(std::abs(r.value) <= 1e-9 + 1e-8 * r.scale);
  CHECK(r.scale > 0);
}

TEST_CASE("graded Leibniz rule") {
  // T0 = id, T1 = d/dx, T2 = d2 is the classical second-order Leibniz rule.
  const Operator T0(BlackBoxOp{[](const SmoothFn& f, double x) { return f.value(x); }, "id"});
  const std::vector<Operator> good{T0, make_derivative(1), make_derivative(2)};
  const SmoothFn f = fn_from_text("sin(x)");
  const SmoothFn g = fn_from_text("exp(x) + x^3");
  const Residual r = graded_leibniz_residual(good, f, g, 0.4);
  CHECK(std::abs(r.value) <= 1e-9 + 1e-8 * r.scale);

  const Operator twice(BlackBoxOp{[](const SmoothFn& h, double x) { return 2 * h.value(x); }, "2f"});
  const std::vector<Operator> bad0{twice};
  CHECK(eval_graded_leibniz_residual(bad0, fn_constant(1), fn_constant(1), 0.0) == -2.0);
  const std::vector<Operator> bad1{twice, make_derivative(1)};
  CHECK(eval_graded_leibniz_residual(bad1, fn_identity(), fn_identity(), 1.0) == -2.0);
}

TEST_CASE("combinatorial sanity") {
  const auto layers = subset_layer_sizes(4);
  CHECK(layers == std::vector<std::uint64_t>{1, 4, 6, 4, 1});
  for (int n = 0; n <= 12; ++n) CHECK(alternating_binomial_sum(n) == (n % 2 == 0 ? 1 : -1));
}

TEST_CASE("structural checks") {
  const Domain dom = Domain::interval(-2, 2);
  const auto grid = dom.grid(11);
  const ResidualReport u = check_units(make_derivative(2, 1.0, dom), grid);
  CHECK(u.pass);
  CHECK(u.max_abs_residual == 0.0);
  CHECK_FALSE(check_units(builtin::square(dom), grid).pass);

  const SmoothFn f1 = fn_from_text("x^2");
  const SmoothFn f2 = fn_sum(std::vector<SmoothFn>{f1, fn_bump({0.8, 1.8}, {1.0, 1.5})});
  const auto inner = Domain::interval(-0.5, 0.5).grid(11);
  const ResidualReport loc = check_localization(make_derivative(3, 1.0, dom), f1, f2, {-0.5, 0.5}, inner);
  CHECK(loc.pass);
  CHECK(loc.max_abs_residual <= 1e-12);
  CHECK_FALSE(loc.vacuous);
  CHECK_FALSE(check_localization(make_derivative(1, 1.0, dom), f1, f2, {-0.5, 0.5}, grid).pass);
  CHECK_FALSE(check_localization(builtin::translate(1.1, dom), f1, f2, {-0.5, 0.5}, inner).pass);

  CHECK(check_poly_annihilation(make_derivative(3, 1.0, dom), 2, grid).pass);
  CHECK_FALSE(check_poly_annihilation(make_derivative(1, 1.0, dom), 1, grid).pass);
}

TEST_CASE("suite accepts canonical operators and rejects square") {
  const Domain dom = Domain::interval(-2, 2);
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 3; ++n) {
    const Operator D = random_canonical(rng, n, dom);
    const ResidualReport r = run_check_suite(D, n, small_suite(7, dom));
    CHECK_MESSAGE(r.pass, "n=", n, " max_normalized=", r.max_normalized);
  }
  CHECK_FALSE(run_check_suite(builtin::square(dom), 1, small_suite(7, dom)).pass);
}

TEST_CASE("first-order operators satisfy higher identities") {
  const Domain dom = Domain::interval(-2, 2);
  const Operator D = make_canonical({fn_from_text("1 + x^2")}, {fn_from_text("sin(x)")}, dom);
  for (int n = 2; n <= 3; ++n) CHECK(run_check_suite(D, n, small_suite(3, dom)).pass);
}

TEST_CASE("order-n operators generally fail order n-1") {
  const Domain dom = Domain::interval(-2, 2);
  CHECK_FALSE(run_check_suite(make_derivative(2, 1.0, dom), 1, small_suite(5, dom)).pass);
}

TEST_CASE("empty grid gives a vacuous pass") {
  SuiteConfig cfg;
  cfg.grid = {};
  const ResidualReport r = run_check_suite(make_derivative(1), 1, cfg);
  CHECK(r.pass);
  CHECK(r.vacuous);
  CHECK(r.samples == 0);
}

TEST_CASE("parallel suite matches the serial reference") {
  const Domain dom = Domain::interval(-2, 2);
  std::mt19937_64 rng(42);
  const Operator D = random_canonical(rng, 2, dom);
  const SuiteConfig cfg = small_suite(99, dom);
  const SuiteResult a = run_check_suite_serial(D, 2, cfg);
  for (int jobs : {1, 2, 4}) {
    const SuiteResult b = run_check_suite_detailed(D, 2, cfg, jobs);
    CHECK(to_json(a.combined()) == to_json(b.combined()));
    CHECK(a.max_diagonal_gap == b.max_diagonal_gap);
  }
}

TEST_CASE("domain violations are reported, not thrown") {
  const Operator D = make_derivative(1, 1.0, Domain::interval(0, 1));
  SuiteConfig cfg;
  cfg.grid = {0.5, 2.0};
  cfg.tuples = 2;
  const ResidualReport r = run_check_suite(D, 1, cfg);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.errors.empty());
}
