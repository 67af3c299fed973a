#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "hodiff/error.hpp"
#include "hodiff/expr.hpp"
#include "hodiff/jet.hpp"
#include "test_support.hpp"

using namespace hodiff;

namespace {

std::size_t syntax_offset(const std::string& text) {
  try {
    parse(text);
  } catch (const SyntaxError& e) {
    return e.offset();
  }
  FAIL("expected a syntax error for '", text, "'");
  return 0;
}

// Expressions that are smooth everywhere, so finite differences are safe.
Expr random_smooth(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  switch (pick(rng)) {
    case 0: return Expr::variable();
    case 1: return Expr::constant(std::abs(std::round(c(rng) * 4) / 4));
    case 2: return Expr::unary(UnaryOp::Sin, random_smooth(rng, depth - 1));
    case 3: return Expr::unary(UnaryOp::Cos, random_smooth(rng, depth - 1));
    case 4: return Expr::binary(BinaryOp::Add, random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 5: return Expr::binary(BinaryOp::Mul, random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 6: return Expr::power(random_smooth(rng, depth - 1), 2);
    default: return Expr::unary(UnaryOp::Neg, random_smooth(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("printing uses minimal parentheses") {
  CHECK(to_string(parse("x^2 + 1")) == "x^2 + 1");
  CHECK(to_string(parse("(1+x)*(2-x)")) == "(1 + x)*(2 - x)");
  CHECK(to_string(parse("1 - (2 - 3)")) == "1 - (2 - 3)");
  CHECK(to_string(parse("(1 - 2) - 3")) == "1 - 2 - 3");
  CHECK(to_string(parse("(-x)^2")) == "(-x)^2");
  CHECK(to_string(parse("-x^2")) == "-x^2");
  CHECK(to_string(parse("((x))")) == "x");
  CHECK(to_string(parse("2E+2")) == "200");
}

TEST_CASE("unary minus binds looser than power") {
  CHECK(eval(parse("-x^2"), 3.0) == -9.0);
  CHECK(eval(parse("(-x)^2"), 3.0) == 9.0);
  CHECK(eval(parse("2*-x"), 3.0) == -6.0);
  CHECK(eval(parse("8/4/2"), 0.0) == 1.0);
}

TEST_CASE("syntax errors report offsets") {
  CHECK(syntax_offset("2*(x") == 4);
  CHECK(syntax_offset("2x") == 1);
  CHECK(syntax_offset("x^-1") == 2);
  CHECK(syntax_offset("x^2^3") == 3);
  CHECK(syntax_offset("sin x") == 4);
  CHECK(syntax_offset("") == 0);
  CHECK(syntax_offset("y") == 0);
}

TEST_CASE("evaluation") {
  const Jet j = eval_jet(parse("x^2 + 1"), 2.0, 2);
  CHECK(j[0] == 5.0);
  CHECK(j[1] == 4.0);
  CHECK(j[2] == 2.0);
  const Jet s = eval_jet(parse("sin(x)*exp(x)"), 0.0, 1);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval(parse("ln(abs(x))"), -std::exp(1.0)) == doctest::Approx(1.0));
}

TEST_CASE("domain errors name the subexpression") {
  try {
    eval_jet(parse("1 + ln(x)"), -1.0, 1);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ln(x)") != std::string::npos);
    CHECK(msg.find("offset 4") != std::string::npos);
  }
  CHECK_THROWS_AS(eval(parse("1/(x-1)"), 1.0), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("abs(x)"), 0.0, 1), DomainError);
}

TEST_CASE("first derivative agrees with central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1.5, 1.5);
  const double h = 1e-5;
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_smooth(rng, 4);
    const double x = ux(rng);
    const double fd = (eval(e, x + h) - eval(e, x - h)) / (2 * h);
    const double d1 = eval_jet(e, x, 1)[1];
    CHECK_MESSAGE(std::abs(fd - d1) <= 1e-5 * std::max(1.0, std::abs(d1)), to_string(e), " at ", x);
  }
}

TEST_CASE("print then parse is the identity") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_smooth(rng, 5);
    const std::string s = to_string(e);
    const Expr back = parse(s);
    CHECK_MESSAGE(structurally_equal(e, back), s);
    CHECK(to_string(back) == s);
  }
}

TEST_CASE("zero constants") {
  CHECK(is_zero_constant(parse("0")));
  CHECK(is_zero_constant(parse("0.0e5")));
  CHECK_FALSE(is_zero_constant(parse("x - x")));
  CHECK_FALSE(is_zero_constant(parse("1")));
}
