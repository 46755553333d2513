#include <doctest.h>

#include <cmath>
#include <numbers>

#include "charflow/error.hpp"
#include "charflow/expr.hpp"
#include "charflow/numerics.hpp"

using namespace charflow;

TEST_CASE("parse builds the initial profiles") {
  const Expr r0 = parse("x + 1/(1+x^2)");
  CHECK(r0.eval(0.0) == 1.0);
  CHECK(r0.eval(2.0) == doctest::Approx(2.2).epsilon(1e-15));
  CHECK(parse("x").eval(-3.5) == -3.5);
  CHECK(parse("atan(x)").eval(1.0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-16));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("2^3^2").eval(0) == 512.0);
  CHECK(parse("-2^2").eval(0) == -4.0);
  CHECK(parse("1 - 2 - 3").eval(0) == -4.0);
  CHECK(parse("8 / 4 / 2").eval(0) == 1.0);
  CHECK(parse("2 + 3 * 4").eval(0) == 14.0);
  CHECK(parse("pi").eval(0) == std::numbers::pi);
  CHECK(parse("k^2 + 1", "k").eval(3.0) == 10.0);
}

TEST_CASE("parse errors carry offsets") {
  try {
    (void)parse("(");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 1);
    CHECK(e.kind() == ParseError::Kind::syntax);
  }
  try {
    (void)parse("x + foo(x)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::unknown_identifier);
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS((void)parse("sin(x, 2)"), ParseError);
  CHECK_THROWS_AS((void)parse("sin()"), ParseError);
  CHECK_THROWS_AS((void)parse("2^x"), ParseError);
  CHECK_THROWS_AS((void)parse("1 +"), ParseError);
  CHECK_THROWS_AS((void)parse("y", "x"), ParseError);
}

TEST_CASE("domain errors are reported") {
  CHECK_THROWS_AS((void)parse("1/x").eval(0.0), DomainError);
  CHECK_THROWS_AS((void)parse("ln(x)").eval(-1.0), DomainError);
  CHECK_THROWS_AS((void)parse("sqrt(x)").eval(-1.0), DomainError);
  CHECK_THROWS_AS((void)parse("x^0.5").eval(-2.0), DomainError);
  CHECK(parse("x^3").eval(-2.0) == -8.0);
  CHECK(parse("cbrt(x)").eval(-8.0) == -2.0);
}

TEST_CASE("differentiate") {
  const Expr d = differentiate(parse("x + 1/(1+x^2)"));
  CHECK(d.eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const Expr f = parse("x + 1/(1+x^2)");
  const double fd = (f.eval(1e-6) - f.eval(-1e-6)) / 2e-6;
  CHECK(std::abs(d.eval(0.0) - fd) < 1e-8);

  const Expr da = differentiate(parse("atan(x)"));
  CHECK(da.eval(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(da.to_string() == "1/(1+x^2)");
  CHECK(differentiate(parse("3")).eval(7.0) == 0.0);

  // Second derivative by applying differentiate twice.
  const Expr d2 = differentiate(differentiate(parse("x^3")));
  CHECK(d2.eval(2.0) == doctest::Approx(12.0));
}

namespace {

Expr random_expr(SampleRng& rng, int depth) {
  const double pick = rng.uniform(0.0, 1.0);
  if (depth == 0 || pick < 0.2) {
    if (rng.uniform(0.0, 1.0) < 0.5) return Expr::variable();
    return Expr::literal(std::round(rng.uniform(0.5, 5.0) * 4.0) / 4.0);
  }
  const Expr a = random_expr(rng, depth - 1);
  const Expr b = random_expr(rng, depth - 1);
  const int op = static_cast<int>(rng.uniform(0.0, 10.0));
  switch (op) {
    case 0: return Expr::add(a, b);
    case 1: return Expr::sub(a, b);
    case 2: return Expr::mul(a, b);
    case 3: return Expr::div(a, Expr::add(Expr::literal(1.0), Expr::pow(b, Expr::literal(2.0))));
    case 4: return Expr::pow(a, Expr::literal(3.0));
    case 5: return Expr::call(ExprFunc::sin, a);
    case 6: return Expr::call(ExprFunc::cos, a);
    case 7: return Expr::call(ExprFunc::atan, a);
    case 8: return Expr::call(ExprFunc::exp, Expr::call(ExprFunc::sin, a));
    default: return Expr::neg(a);
  }
}

}  // namespace

TEST_CASE("property: symbolic derivative matches central differences") {
  SampleRng rng(seed_from_env());
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = random_expr(rng, 4);
    const Expr d = differentiate(e);
    for (int j = 0; j < 100; ++j) {
      const double x = rng.uniform(-1.0, 1.0), h = 1e-6;
      double fd = 0.0, v = 0.0, dv = 0.0;
      try {
        fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
        v = e.eval(x);
        dv = d.eval(x);
      } catch (const DomainError&) {
        continue;
      }
      INFO(e.to_string(), " at x=", x);
      CHECK(std::abs(dv - fd) <= 1e-6 * (1.0 + std::abs(v)) * (1.0 + std::abs(dv)));
      ++checked;
    }
  }
  CHECK(checked > 9000);
}

TEST_CASE("property: print then parse is the identity on trees") {
  SampleRng rng(seed_from_env() + 1);
  for (int i = 0; i < 200; ++i) {
    const Expr e = random_expr(rng, 5);
    INFO(e.to_string());
    CHECK(parse(e.to_string()) == e);
    CHECK(parse(differentiate(e).to_string()) == differentiate(e));
  }
  for (const char* s : {"x + 1/(1+x^2)", "-x^2", "(-x)^2", "2^3^2", "(2^3)^2", "a - (b - c)", "x/(x*x)"}) {
    if (std::string(s).find('a') != std::string::npos) continue;
    CHECK(parse(parse(s).to_string()) == parse(s));
  }
}

TEST_CASE("evaluation is deterministic") {
  const Expr e = parse("sin(x)^2 + cbrt(exp(x)) / (1 + atan(x)^2)");
  for (double x : {-2.0, 0.1, 3.7}) CHECK(e.eval(x) == e.eval(x));
}
