#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "hodiff/jet.hpp"

namespace hodiff {

enum class UnaryOp { Neg, Sin, Cos, Exp, Ln, Abs };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode;

/// Immutable AST of a one-variable expression in `x`.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" number)?
///   atom   := number | "x" | ident "(" expr ")" | "(" expr ")"
///   ident  := "sin" | "cos" | "exp" | "ln" | "abs"
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable();
  static Expr unary(UnaryOp op, Expr arg);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  /// Exponent must be a finite nonnegative literal.
  static Expr power(Expr base, double exponent);

  const ExprNode& node() const { return *node_; }

 private:
  friend class ExprParser;
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  struct Constant {
    double value;
  };
  struct Variable {};
  struct Unary {
    UnaryOp op;
    Expr arg;
  };
  struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
  };
  struct Power {
    Expr base;
    double exponent;
  };

  std::variant<Constant, Variable, Unary, Binary, Power> kind;
  // Source span [begin, end) for parsed nodes; zero for constructed ones.
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Throws SyntaxError carrying the byte offset and the expected token.
Expr parse(std::string_view text);

/// Minimal-parenthesis rendering; `parse(to_string(e))` is structurally equal to `e`.
std::string to_string(const Expr& e);

/// Compares tree shape, operators and literal values; ignores source spans.
bool structurally_equal(const Expr& a, const Expr& b);

bool is_zero_constant(const Expr& e);

/// Jet of the denoted function at x0. Throws DomainError naming the
/// offending subexpression when x0 is outside its natural domain.
Jet eval_jet(const Expr& e, double x0, int order);
double eval(const Expr& e, double x);

}  // namespace hodiff
