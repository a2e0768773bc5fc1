#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tinf/errors.hpp"
#include "tinf/expression.hpp"

using tinf::Expr;
using tinf::parse_expression;

namespace {

double eval(const std::string& s, std::vector<double> x = {}) { return parse_expression(s).eval(std::span<const double>(x)); }

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("2+3*4") == 14);
  CHECK(eval("(2+3)*4") == 20);
  CHECK(eval("-2^2") == -4);
  CHECK(eval("2^3^2") == 512);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("8/4/2") == 1);
  CHECK(eval("1 - 2 - 3") == -4);
  CHECK(eval("--3") == 3);
  CHECK(eval("1.5e-3 * 2E3") == doctest::Approx(3.0));
  CHECK(eval(" x0 * x1 + x2 ", {2, 3, 4}) == 10);
}

TEST_CASE("functions") {
  CHECK(eval("sin(0)") == 0);
  CHECK(eval("cos(0)") == 1);
  CHECK(eval("exp(1)") == doctest::Approx(std::exp(1.0)));
  CHECK(eval("log(exp(2))") == doctest::Approx(2.0));
  CHECK(eval("sqrt(16)") == 4);
  CHECK(eval("sqrt(x0^2 + x1^2)", {3, 4}) == 5);
}

TEST_CASE("arity counts the highest variable") {
  CHECK(parse_expression("1").arity() == 0);
  CHECK(parse_expression("x3 + x0").arity() == 4);
  CHECK(parse_expression("2.5").is_constant());
  CHECK(parse_expression("2.5").constant_value() == 2.5);
}

TEST_CASE("malformed text is rejected with a position") {
  for (const char* bad : {"", "2+", "x", "foo(1)", "(1", "1 2", "sin 1", "x0 +* x1", "3..4", "log()"}) {
    CHECK_THROWS_AS(parse_expression(bad), tinf::ParseError);
  }
  try {
    parse_expression("1 + $");
    FAIL("no throw");
  } catch (const tinf::ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("evaluation errors propagate") {
  CHECK_THROWS_AS(eval("log(x0)", {-1}), tinf::EvaluationError);
  CHECK_THROWS_AS(eval("1/x0", {0}), tinf::EvaluationError);
  CHECK_THROWS_AS(eval("x0^0.5", {-4}), tinf::EvaluationError);
}

TEST_CASE("operator-built and parsed expressions agree") {
  const Expr x = Expr::variable(0), y = Expr::variable(1);
  const Expr built = sin(x) * y + exp(x / (Expr(2.0) + y * y)) - pow(x, Expr(3.0));
  const Expr parsed = parse_expression("sin(x0)*x1 + exp(x0/(2 + x1*x1)) - x0^3");
  oracle::Gen g(5);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> v = g.vec(2);
    CHECK(built.eval(std::span<const double>(v)) == parsed.eval(std::span<const double>(v)));
  }
}

TEST_CASE("printing then parsing preserves the value") {
  oracle::Gen g(6);
  for (int k = 0; k < 200; ++k) {
    const Expr e = oracle::random_expr(g, 3, 4);
    const Expr back = parse_expression(e.to_string());
    const std::vector<double> v = g.vec(3);
    const double a = e.eval(std::span<const double>(v)), b = back.eval(std::span<const double>(v));
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}
