#include "hodiff/expr.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <system_error>

#include "hodiff/error.hpp"

namespace hodiff {

namespace {

std::shared_ptr<const ExprNode> make(ExprNode::Constant c) {
  return std::make_shared<const ExprNode>(ExprNode{c});
}

}  // namespace

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw StructuralError("expression constant must be finite");
  return Expr(make(ExprNode::Constant{value}));
}

Expr Expr::variable() {
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprNode::Variable{}}));
}

Expr Expr::unary(UnaryOp op, Expr arg) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{ExprNode::Unary{op, std::move(arg)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{ExprNode::Binary{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::power(Expr base, double exponent) {
  if (!std::isfinite(exponent) || exponent < 0.0) {
    throw StructuralError("power exponent must be a finite nonnegative literal");
  }
  return Expr(
      std::make_shared<const ExprNode>(ExprNode{ExprNode::Power{std::move(base), exponent}}));
}

// ---------------------------------------------------------------------------
// Parser

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) { advance(); }

  Expr parse_all() {
    Expr e = parse_expr();
    if (tok_.kind != Tok::End) fail("operator or end of input");
    return e;
  }

 private:
  enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

  struct Token {
    Tok kind = Tok::End;
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
    std::string_view ident;
  };

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(tok_.begin, expected);
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

  void advance() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
    tok_ = Token{};
    tok_.begin = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::End;
      tok_.end = pos_;
      return;
    }
    const char c = text_[pos_];
    if (is_digit(c)) {
      lex_number();
      return;
    }
    if (is_alpha(c)) {
      std::size_t p = pos_;
      while (p < text_.size() && is_alpha(text_[p])) ++p;
      tok_.kind = Tok::Ident;
      tok_.ident = text_.substr(pos_, p - pos_);
      tok_.end = pos_ = p;
      return;
    }
    switch (c) {
      case '+': tok_.kind = Tok::Plus; break;
      case '-': tok_.kind = Tok::Minus; break;
      case '*': tok_.kind = Tok::Star; break;
      case '/': tok_.kind = Tok::Slash; break;
      case '^': tok_.kind = Tok::Caret; break;
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      default: throw SyntaxError(pos_, "number, 'x', function name, operator or parenthesis");
    }
    tok_.end = ++pos_;
  }

  void lex_number() {
    std::size_t p = pos_;
    while (p < text_.size() && is_digit(text_[p])) ++p;
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      if (p >= text_.size() || !is_digit(text_[p])) throw SyntaxError(p, "digit after '.'");
      while (p < text_.size() && is_digit(text_[p])) ++p;
    }
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      ++p;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p >= text_.size() || !is_digit(text_[p])) throw SyntaxError(p, "exponent digits");
      while (p < text_.size() && is_digit(text_[p])) ++p;
    }
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, text_.data() + p, value);
    if (ec != std::errc{} || ptr != text_.data() + p || !std::isfinite(value)) {
      throw SyntaxError(pos_, "finite number literal");
    }
    tok_.kind = Tok::Number;
    tok_.number = value;
    tok_.end = pos_ = p;
  }

  Expr spanned(Expr e, std::size_t begin, std::size_t end) {
    auto node = std::make_shared<ExprNode>(e.node());
    node->begin = begin;
    node->end = end;
    return Expr(std::move(node));
  }

  Expr parse_expr() {
    const std::size_t begin = tok_.begin;
    Expr lhs = parse_term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const BinaryOp op = tok_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      Expr rhs = parse_term();
      lhs = spanned(Expr::binary(op, lhs, rhs), begin, last_end_);
    }
    return lhs;
  }

  Expr parse_term() {
    const std::size_t begin = tok_.begin;
    Expr lhs = parse_factor();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const BinaryOp op = tok_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      Expr rhs = parse_factor();
      lhs = spanned(Expr::binary(op, lhs, rhs), begin, last_end_);
    }
    return lhs;
  }

  Expr parse_factor() {
    if (tok_.kind == Tok::Minus) {
      const std::size_t begin = tok_.begin;
      advance();
      Expr arg = parse_factor();
      return spanned(Expr::unary(UnaryOp::Neg, arg), begin, last_end_);
    }
    return parse_power();
  }

  Expr parse_power() {
    const std::size_t begin = tok_.begin;
    Expr base = parse_atom();
    if (tok_.kind != Tok::Caret) return base;
    advance();
    if (tok_.kind != Tok::Number) fail("number literal exponent");
    const double exponent = tok_.number;
    consume();
    return spanned(Expr::power(base, exponent), begin, last_end_);
  }

  static std::optional<UnaryOp> function_named(std::string_view name) {
    if (name == "sin") return UnaryOp::Sin;
    if (name == "cos") return UnaryOp::Cos;
    if (name == "exp") return UnaryOp::Exp;
    if (name == "ln") return UnaryOp::Ln;
    if (name == "abs") return UnaryOp::Abs;
    return std::nullopt;
  }

  void consume() {
    last_end_ = tok_.end;
    advance();
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(what);
    consume();
  }

  Expr parse_atom() {
    const std::size_t begin = tok_.begin;
    switch (tok_.kind) {
      case Tok::Number: {
        const double v = tok_.number;
        consume();
        return spanned(Expr::constant(v), begin, last_end_);
      }
      case Tok::Ident: {
        if (tok_.ident == "x") {
          consume();
          return spanned(Expr::variable(), begin, last_end_);
        }
        const auto op = function_named(tok_.ident);
        if (!op) fail("'x' or function name (sin, cos, exp, ln, abs)");
        consume();
        expect(Tok::LParen, "'('");
        Expr arg = parse_expr();
        expect(Tok::RParen, "')'");
        return spanned(Expr::unary(*op, arg), begin, last_end_);
      }
      case Tok::LParen: {
        consume();
        Expr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("number, 'x', function name or '('");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  Token tok_;
};

Expr parse(std::string_view text) { return ExprParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  return std::visit(
      [](const auto& k) -> int {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExprNode::Binary>) {
          return (k.op == BinaryOp::Add || k.op == BinaryOp::Sub) ? 1 : 2;
        } else if constexpr (std::is_same_v<K, ExprNode::Unary>) {
          return k.op == UnaryOp::Neg ? 3 : 5;
        } else if constexpr (std::is_same_v<K, ExprNode::Power>) {
          return 4;
        } else if constexpr (std::is_same_v<K, ExprNode::Constant>) {
          return k.value < 0.0 || std::signbit(k.value) ? 3 : 5;
        } else {
          return 5;
        }
      },
      e.node().kind);
}

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print(e, out);
  if (parens) out += ')';
}

const char* function_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Neg: break;
  }
  return "?";
}

void print(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExprNode::Constant>) {
          out += number_text(k.value);
        } else if constexpr (std::is_same_v<K, ExprNode::Variable>) {
          out += 'x';
        } else if constexpr (std::is_same_v<K, ExprNode::Unary>) {
          if (k.op == UnaryOp::Neg) {
            out += '-';
            print_wrapped(k.arg, precedence(k.arg) < 3, out);
          } else {
            out += function_name(k.op);
            out += '(';
            print(k.arg, out);
            out += ')';
          }
        } else if constexpr (std::is_same_v<K, ExprNode::Binary>) {
          const int p = (k.op == BinaryOp::Add || k.op == BinaryOp::Sub) ? 1 : 2;
          print_wrapped(k.lhs, precedence(k.lhs) < p, out);
          switch (k.op) {
            case BinaryOp::Add: out += " + "; break;
            case BinaryOp::Sub: out += " - "; break;
            case BinaryOp::Mul: out += '*'; break;
            case BinaryOp::Div: out += '/'; break;
          }
          print_wrapped(k.rhs, precedence(k.rhs) <= p, out);
        } else {
          print_wrapped(k.base, precedence(k.base) < 5, out);
          out += '^';
          out += number_text(k.exponent);
        }
      },
      e.node().kind);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const auto& ka = a.node().kind;
  const auto& kb = b.node().kind;
  if (ka.index() != kb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using K = std::decay_t<decltype(x)>;
        const auto& y = std::get<K>(kb);
        if constexpr (std::is_same_v<K, ExprNode::Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<K, ExprNode::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<K, ExprNode::Unary>) {
          return x.op == y.op && structurally_equal(x.arg, y.arg);
        } else if constexpr (std::is_same_v<K, ExprNode::Binary>) {
          return x.op == y.op && structurally_equal(x.lhs, y.lhs) &&
                 structurally_equal(x.rhs, y.rhs);
        } else {
          return x.exponent == y.exponent && structurally_equal(x.base, y.base);
        }
      },
      ka);
}

bool is_zero_constant(const Expr& e) {
  const auto* c = std::get_if<ExprNode::Constant>(&e.node().kind);
  return c != nullptr && c->value == 0.0;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_failure(const Expr& e, const std::string& what, double x0) {
  std::string msg = what + " in '" + to_string(e) + "'";
  if (e.node().end > e.node().begin) {
    msg += " at offset " + std::to_string(e.node().begin) + ".." + std::to_string(e.node().end);
  }
  msg += " (x0=" + number_text(x0) + ")";
  throw DomainError(msg);
}

}  // namespace

Jet eval_jet(const Expr& e, double x0, int order) {
  return std::visit(
      [&](const auto& k) -> Jet {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExprNode::Constant>) {
          return Jet::constant(x0, order, k.value);
        } else if constexpr (std::is_same_v<K, ExprNode::Variable>) {
          return Jet::variable(x0, order);
        } else if constexpr (std::is_same_v<K, ExprNode::Unary>) {
          Jet a = eval_jet(k.arg, x0, order);
          switch (k.op) {
            case UnaryOp::Neg: return negate(a);
            case UnaryOp::Sin: return sin(a);
            case UnaryOp::Cos: return cos(a);
            case UnaryOp::Exp:
              try {
                return exp(a);
              } catch (const NumericError&) {
                throw NumericError("exp overflow in '" + to_string(e) + "' (x0=" +
                                   number_text(x0) + ")");
              }
            case UnaryOp::Ln:
              if (!(a.value() > 0.0)) domain_failure(e, "ln of nonpositive value", x0);
              return ln_abs(a);
            case UnaryOp::Abs:
              if (a.value() == 0.0 && order > 0) domain_failure(e, "abs not differentiable", x0);
              return abs(a);
          }
          throw StructuralError("unknown unary operator");
        } else if constexpr (std::is_same_v<K, ExprNode::Binary>) {
          Jet l = eval_jet(k.lhs, x0, order);
          Jet r = eval_jet(k.rhs, x0, order);
          switch (k.op) {
            case BinaryOp::Add: return sum(l, r);
            case BinaryOp::Sub: return difference(l, r);
            case BinaryOp::Mul: return product(l, r);
            case BinaryOp::Div:
              if (r.value() == 0.0) domain_failure(e, "division by zero", x0);
              return quotient(l, r);
          }
          throw StructuralError("unknown binary operator");
        } else {
          Jet b = eval_jet(k.base, x0, order);
          const bool integral = k.exponent == std::floor(k.exponent) && k.exponent <= 64.0;
          if (!integral && !(b.value() > 0.0)) {
            domain_failure(e, "non-integer power of nonpositive value", x0);
          }
          return power(b, k.exponent);
        }
      },
      e.node().kind);
}

double eval(const Expr& e, double x) { return eval_jet(e, x, 0).value(); }

}  // namespace hodiff
