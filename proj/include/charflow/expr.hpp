#pragma once

// Single-variable arithmetic expressions: parse, print, evaluate, differentiate.
//
// Grammar (standard precedence, `^` binds tighter than unary minus and is
// right-associative):
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'pi' | VAR | FUNC '(' expr ')' | '(' expr ')'
//   FUNC   := sin | cos | tan | atan | exp | ln | sqrt | cbrt
//
// The exponent of `^` must be variable-free.

#include <memory>
#include <string>
#include <string_view>

namespace charflow {

enum class ExprOp { literal, pi, variable, neg, add, sub, mul, div, pow, call };
enum class ExprFunc { sin, cos, tan, atan, exp, ln, sqrt, cbrt };

class Expr {
 public:
  struct Node;

  Expr();  // literal 0

  static Expr literal(double value);
  static Expr number(double value);  // negative values become neg(literal)
  static Expr pi();
  static Expr variable();
  static Expr neg(Expr a);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr pow(Expr base, Expr exponent);
  static Expr call(ExprFunc f, Expr arg);

  ExprOp op() const;
  ExprFunc func() const;
  double value() const;  // literal payload
  Expr lhs() const;
  Expr rhs() const;

  bool is_constant() const;  // no free variable

  /// Evaluates with the free variable bound to x. Throws DomainError instead of producing NaN/inf.
  double eval(double x) const;

  /// Minimal-parenthesis rendering; parse(to_string()) reproduces the tree.
  std::string to_string(std::string_view var = "x") const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  friend Expr parse(std::string_view src, std::string_view var);
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses src with `var` as the free variable name. Throws ParseError.
Expr parse(std::string_view src, std::string_view var = "x");

/// Exact symbolic derivative with respect to the free variable, constant-folded.
Expr differentiate(const Expr& e);

const char* func_name(ExprFunc f);

}  // namespace charflow
