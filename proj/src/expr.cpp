#include "charflow/expr.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>

#include "charflow/error.hpp"

namespace charflow {

struct Expr::Node {
  ExprOp op = ExprOp::literal;
  ExprFunc func = ExprFunc::sin;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(ExprOp op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool node_equal(const Expr::Node* x, const Expr::Node* y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->op != y->op) return false;
  switch (x->op) {
    case ExprOp::literal:
      return x->value == y->value;
    case ExprOp::pi:
    case ExprOp::variable:
      return true;
    case ExprOp::call:
      return x->func == y->func && node_equal(x->a.get(), y->a.get());
    case ExprOp::neg:
      return node_equal(x->a.get(), y->a.get());
    default:
      return node_equal(x->a.get(), y->a.get()) && node_equal(x->b.get(), y->b.get());
  }
}

bool node_constant(const Expr::Node* n) {
  switch (n->op) {
    case ExprOp::literal:
    case ExprOp::pi:
      return true;
    case ExprOp::variable:
      return false;
    case ExprOp::neg:
    case ExprOp::call:
      return node_constant(n->a.get());
    default:
      return node_constant(n->a.get()) && node_constant(n->b.get());
  }
}

[[noreturn]] void domain(const char* what) { throw DomainError(std::string("expression domain error: ") + what); }

double is_integral(double e) { return std::isfinite(e) && std::floor(e) == e; }

double node_eval(const Expr::Node* n, double x) {
  switch (n->op) {
    case ExprOp::literal:
      return n->value;
    case ExprOp::pi:
      return M_PI;
    case ExprOp::variable:
      return x;
    case ExprOp::neg:
      return -node_eval(n->a.get(), x);
    case ExprOp::add:
      return node_eval(n->a.get(), x) + node_eval(n->b.get(), x);
    case ExprOp::sub:
      return node_eval(n->a.get(), x) - node_eval(n->b.get(), x);
    case ExprOp::mul:
      return node_eval(n->a.get(), x) * node_eval(n->b.get(), x);
    case ExprOp::div: {
      double num = node_eval(n->a.get(), x);
      double den = node_eval(n->b.get(), x);
      if (den == 0.0) domain("division by zero");
      return num / den;
    }
    case ExprOp::pow: {
      double base = node_eval(n->a.get(), x);
      double e = node_eval(n->b.get(), x);
      if (is_integral(e)) {
        if (base == 0.0 && e < 0.0) domain("zero to a negative power");
        return std::pow(base, e);
      }
      if (!(base > 0.0)) domain("real exponent of a non-positive base");
      return std::pow(base, e);
    }
    case ExprOp::call: {
      double v = node_eval(n->a.get(), x);
      switch (n->func) {
        case ExprFunc::sin: return std::sin(v);
        case ExprFunc::cos: return std::cos(v);
        case ExprFunc::tan: return std::tan(v);
        case ExprFunc::atan: return std::atan(v);
        case ExprFunc::exp: return std::exp(v);
        case ExprFunc::ln:
          if (!(v > 0.0)) domain("ln of a non-positive argument");
          return std::log(v);
        case ExprFunc::sqrt:
          if (v < 0.0) domain("sqrt of a negative argument");
          return std::sqrt(v);
        case ExprFunc::cbrt: return std::cbrt(v);
      }
    }
  }
  domain("corrupt expression");
}

// ---------------------------------------------------------------- printing

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::add:
    case ExprOp::sub: return 1;
    case ExprOp::mul:
    case ExprOp::div: return 2;
    case ExprOp::neg: return 3;
    case ExprOp::pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expr::Node* n, std::string_view var, std::string& out);

void print_wrapped(const Expr::Node* n, bool wrap, std::string_view var, std::string& out) {
  if (wrap) out += '(';
  print(n, var, out);
  if (wrap) out += ')';
}

void print(const Expr::Node* n, std::string_view var, std::string& out) {
  const int p = precedence(n->op);
  switch (n->op) {
    case ExprOp::literal:
      out += format_number(n->value);
      return;
    case ExprOp::pi:
      out += "pi";
      return;
    case ExprOp::variable:
      out += var;
      return;
    case ExprOp::neg:
      out += '-';
      print_wrapped(n->a.get(), precedence(n->a->op) < p, var, out);
      return;
    case ExprOp::call:
      out += func_name(n->func);
      out += '(';
      print(n->a.get(), var, out);
      out += ')';
      return;
    case ExprOp::pow:
      print_wrapped(n->a.get(), precedence(n->a->op) <= p, var, out);
      out += '^';
      print_wrapped(n->b.get(), precedence(n->b->op) < 3, var, out);
      return;
    default: {
      const char sym = n->op == ExprOp::add ? '+' : n->op == ExprOp::sub ? '-' : n->op == ExprOp::mul ? '*' : '/';
      print_wrapped(n->a.get(), precedence(n->a->op) < p, var, out);
      out += sym;
      print_wrapped(n->b.get(), precedence(n->b->op) <= p, var, out);
      return;
    }
  }
}

// ----------------------------------------------------------------- parsing

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail(ParseError::Kind::syntax, "unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, const std::string& what) const { throw ParseError(kind, pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(ParseError::Kind::syntax, std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(ExprOp::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(ExprOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(ExprOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(ExprOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(ExprOp::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      NodePtr exponent = parse_unary();
      if (!node_constant(exponent.get())) throw ParseError(ParseError::Kind::syntax, at, "exponent must be constant");
      return make_node(ExprOp::pow, base, exponent);
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseError::Kind::syntax, "expected expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(ParseError::Kind::syntax, "expected expression");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_ || !std::isfinite(v)) {
      throw ParseError(ParseError::Kind::syntax, start, "malformed number");
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = ExprOp::literal;
    n->value = v;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == var_) return make_node(ExprOp::variable);
    if (name == "pi") return make_node(ExprOp::pi);

    static constexpr ExprFunc kFuncs[] = {ExprFunc::sin, ExprFunc::cos, ExprFunc::tan,  ExprFunc::atan,
                                          ExprFunc::exp, ExprFunc::ln,  ExprFunc::sqrt, ExprFunc::cbrt};
    for (ExprFunc f : kFuncs) {
      if (name != func_name(f)) continue;
      skip_ws();
      if (!accept('(')) fail(ParseError::Kind::arity, "function '" + std::string(name) + "' takes one argument");
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')')
        fail(ParseError::Kind::arity, "function '" + std::string(name) + "' takes one argument");
      NodePtr arg = parse_expr();
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ',')
        fail(ParseError::Kind::arity, "function '" + std::string(name) + "' takes one argument");
      expect(')');
      auto n = std::make_shared<Expr::Node>();
      n->op = ExprOp::call;
      n->func = f;
      n->a = std::move(arg);
      return n;
    }
    throw ParseError(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------- folding constructors

std::optional<double> as_number(const Expr& e) {
  if (e.op() == ExprOp::literal) return e.value();
  if (e.op() == ExprOp::neg && e.lhs().op() == ExprOp::literal) return -e.lhs().value();
  return std::nullopt;
}

bool is_value(const Expr& e, double v) {
  auto n = as_number(e);
  return n && *n == v;
}

// Replaces a variable-free subtree by its value when evaluation succeeds.
Expr fold(Expr e) {
  if (!e.is_constant() || as_number(e) || e.op() == ExprOp::pi) return e;
  try {
    return Expr::number(e.eval(0.0));
  } catch (const DomainError&) {
    return e;
  }
}

Expr f_neg(const Expr& a) {
  if (auto n = as_number(a)) return Expr::number(-*n);
  if (a.op() == ExprOp::neg) return a.lhs();
  return Expr::neg(a);
}

Expr f_add(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return fold(Expr::add(a, b));
}

Expr f_sub(const Expr& a, const Expr& b) {
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return f_neg(b);
  return fold(Expr::sub(a, b));
}

Expr f_mul(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0) || is_value(b, 0.0)) return Expr::literal(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return f_neg(b);
  if (is_value(b, -1.0)) return f_neg(a);
  return fold(Expr::mul(a, b));
}

Expr f_div(const Expr& a, const Expr& b) {
  if (is_value(a, 0.0)) return Expr::literal(0.0);
  if (is_value(b, 1.0)) return a;
  return fold(Expr::div(a, b));
}

Expr f_pow(const Expr& a, const Expr& e) {
  if (is_value(e, 0.0)) return Expr::literal(1.0);
  if (is_value(e, 1.0)) return a;
  return fold(Expr::pow(a, e));
}

Expr f_call(ExprFunc f, const Expr& a) { return fold(Expr::call(f, a)); }

Expr derive(const Expr& e) {
  const Expr zero = Expr::literal(0.0);
  const Expr one = Expr::literal(1.0);
  switch (e.op()) {
    case ExprOp::literal:
    case ExprOp::pi:
      return zero;
    case ExprOp::variable:
      return one;
    case ExprOp::neg:
      return f_neg(derive(e.lhs()));
    case ExprOp::add:
      return f_add(derive(e.lhs()), derive(e.rhs()));
    case ExprOp::sub:
      return f_sub(derive(e.lhs()), derive(e.rhs()));
    case ExprOp::mul: {
      const Expr a = e.lhs(), b = e.rhs();
      return f_add(f_mul(derive(a), b), f_mul(a, derive(b)));
    }
    case ExprOp::div: {
      const Expr a = e.lhs(), b = e.rhs();
      const Expr da = derive(a), db = derive(b);
      if (is_value(db, 0.0)) return f_div(da, b);
      return f_div(f_sub(f_mul(da, b), f_mul(a, db)), f_pow(b, Expr::literal(2.0)));
    }
    case ExprOp::pow: {
      const Expr a = e.lhs(), c = e.rhs();
      return f_mul(f_mul(c, f_pow(a, f_sub(c, one))), derive(a));
    }
    case ExprOp::call: {
      const Expr a = e.lhs();
      const Expr da = derive(a);
      if (is_value(da, 0.0)) return zero;
      switch (e.func()) {
        case ExprFunc::sin:
          return f_mul(f_call(ExprFunc::cos, a), da);
        case ExprFunc::cos:
          return f_neg(f_mul(f_call(ExprFunc::sin, a), da));
        case ExprFunc::tan:
          return f_mul(f_add(one, f_pow(f_call(ExprFunc::tan, a), Expr::literal(2.0))), da);
        case ExprFunc::atan:
          return f_div(da, f_add(one, f_pow(a, Expr::literal(2.0))));
        case ExprFunc::exp:
          return f_mul(f_call(ExprFunc::exp, a), da);
        case ExprFunc::ln:
          return f_div(da, a);
        case ExprFunc::sqrt:
          return f_div(da, f_mul(Expr::literal(2.0), f_call(ExprFunc::sqrt, a)));
        case ExprFunc::cbrt:
          return f_div(da, f_mul(Expr::literal(3.0), f_pow(f_call(ExprFunc::cbrt, a), Expr::literal(2.0))));
      }
    }
  }
  return zero;
}

}  // namespace

const char* func_name(ExprFunc f) {
  switch (f) {
    case ExprFunc::sin: return "sin";
    case ExprFunc::cos: return "cos";
    case ExprFunc::tan: return "tan";
    case ExprFunc::atan: return "atan";
    case ExprFunc::exp: return "exp";
    case ExprFunc::ln: return "ln";
    case ExprFunc::sqrt: return "sqrt";
    case ExprFunc::cbrt: return "cbrt";
  }
  return "?";
}

Expr::Expr() : Expr(literal(0.0)) {}

Expr Expr::literal(double value) {
  if (!std::isfinite(value) || std::signbit(value)) {
    throw std::invalid_argument("Expr::literal requires a finite non-negative value");
  }
  auto n = std::make_shared<Node>();
  n->op = ExprOp::literal;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::number(double value) {
  if (value == 0.0) return literal(0.0);
  return value < 0.0 ? neg(literal(-value)) : literal(value);
}

Expr Expr::pi() { return Expr(make_node(ExprOp::pi)); }
Expr Expr::variable() { return Expr(make_node(ExprOp::variable)); }
Expr Expr::neg(Expr a) { return Expr(make_node(ExprOp::neg, a.node_)); }
Expr Expr::add(Expr a, Expr b) { return Expr(make_node(ExprOp::add, a.node_, b.node_)); }
Expr Expr::sub(Expr a, Expr b) { return Expr(make_node(ExprOp::sub, a.node_, b.node_)); }
Expr Expr::mul(Expr a, Expr b) { return Expr(make_node(ExprOp::mul, a.node_, b.node_)); }
Expr Expr::div(Expr a, Expr b) { return Expr(make_node(ExprOp::div, a.node_, b.node_)); }

Expr Expr::pow(Expr base, Expr exponent) {
  if (!exponent.is_constant()) throw std::invalid_argument("Expr::pow requires a constant exponent");
  return Expr(make_node(ExprOp::pow, base.node_, exponent.node_));
}

Expr Expr::call(ExprFunc f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = ExprOp::call;
  n->func = f;
  n->a = arg.node_;
  return Expr(std::move(n));
}

ExprOp Expr::op() const { return node_->op; }
ExprFunc Expr::func() const { return node_->func; }
double Expr::value() const { return node_->value; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
bool Expr::is_constant() const { return node_constant(node_.get()); }

double Expr::eval(double x) const {
  const double v = node_eval(node_.get(), x);
  if (!std::isfinite(v)) domain("non-finite result");
  return v;
}

std::string Expr::to_string(std::string_view var) const {
  std::string out;
  print(node_.get(), var, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return node_equal(a.node_.get(), b.node_.get()); }

Expr parse(std::string_view src, std::string_view var) { return Expr(Parser(src, var).parse_all()); }

Expr differentiate(const Expr& e) { return derive(e); }

}  // namespace charflow
