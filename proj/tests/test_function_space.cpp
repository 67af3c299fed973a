#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hodiff/error.hpp"
#include "hodiff/function_space.hpp"
#include "test_support.hpp"

using namespace hodiff;

TEST_CASE("domain membership is strict") {
  const Domain d({{-1, 0}, {1, 2}});
  CHECK(d.contains(-0.5));
  CHECK(d.contains(1.5));
  CHECK_FALSE(d.contains(0.0));
  CHECK_FALSE(d.contains(0.5));
  CHECK_FALSE(d.contains(2.0));
  CHECK(Domain::real_line().contains(1e300));
  for (double x : d.grid(20)) CHECK(d.contains(x));
  CHECK_THROWS_AS(Domain({{1, 1}}), StructuralError);
}

TEST_CASE("products of functions") {
  const SmoothFn id = fn_identity();
  const SmoothFn sq = fn_product({id, id});
  CHECK(sq.value(3.0) == 9.0);
  const Jet j = sq.jet(3.0, 2);
  CHECK(j[1] == 6.0);
  CHECK(j[2] == 2.0);
  CHECK(fn_product({fn_constant(-1)}).value(7.0) == -1.0);
  CHECK_THROWS_AS(fn_product(std::span<const SmoothFn>{}), StructuralError);

  const SmoothFn a = fn_from_text("sin(x) + x^2");
  const SmoothFn b = fn_from_text("exp(x/2)");
  const Jet ab = fn_product({a, b}).jet(0.3, 6);
  const Jet ba = fn_product({b, a}).jet(0.3, 6);
  CHECK(ab == ba);
}

TEST_CASE("Taylor polynomial from a jet") {
  const SmoothFn p = fn_from_jet(3.0, {0, 1});
  CHECK(p.value(5.0) == 2.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(trial % 8) + 1);
    for (auto& x : v) x = u(rng);
    const double x0 = u(rng);
    const Jet j = fn_from_jet(x0, v).jet(x0, static_cast<int>(v.size()) - 1);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(close_rel(j[static_cast<int>(k)], v[k], 1e-13));
  }
}

TEST_CASE("bump functions") {
  const SmoothFn b = fn_bump({0, 4}, {1.5, 2.5});
  CHECK(b.value(2.0) == 1.0);
  CHECK(b.value(1.5) == 1.0);
  CHECK(b.value(0.0) == 0.0);
  CHECK(b.value(-1.0) == 0.0);
  CHECK(b.value(4.5) == 0.0);
  const Jet in = b.jet(2.0, 6);
  for (int k = 1; k <= 6; ++k) CHECK(in[k] == 0.0);
  const Jet out = b.jet(-0.2, 6);
  for (int k = 0; k <= 6; ++k) CHECK(out[k] == 0.0);

  const double h = 1e-5;
  for (int i = 0; i <= 100; ++i) {
    const double x = -0.5 + 5.0 * i / 100.0;
    const double v = b.value(x);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    const double fd = (b.value(x + h) - b.value(x - h)) / (2 * h);
    CHECK_MESSAGE(std::abs(fd - b.jet(x, 1)[1]) <= 1e-4, "x=", x);
  }
  CHECK_THROWS_AS(fn_bump({0, 1}, {0.5, 1.0}), StructuralError);
  CHECK_THROWS_AS(fn_bump({0, 1}, {0.7, 0.6}), StructuralError);
}

TEST_CASE("jets are consistent across requested orders") {
  const SmoothFn f = fn_from_text("exp(sin(x))*(1 + x^3)");
  const Jet hi = f.jet(0.7, 10);
  for (int order = 0; order < 10; ++order) {
    const Jet lo = f.jet(0.7, order);
    for (int k = 0; k <= order; ++k) CHECK(close_rel(lo[k], hi[k], 1e-13));
  }
}

TEST_CASE("composite constructors") {
  const SmoothFn g = fn_polynomial({0, 1, 1});
  CHECK(fn_exp_of(g).value(1.0) == doctest::Approx(std::exp(2.0)));
  CHECK(fn_power(fn_identity(), 3).value(2.0) == 8.0);
  CHECK(fn_monomial(4).jet(1.0, 4)[4] == 24.0);
  CHECK(fn_scale_add(2, fn_identity(), -1, fn_constant(1)).value(3.0) == 5.0);
  CHECK(fn_constant(0).is_known_zero());
  CHECK_FALSE(fn_constant(2).is_known_zero());
}
