#include <doctest.h>

#include <cmath>
#include <random>

#include "phisim/expr.hpp"
#include "support/fields.hpp"

using namespace phisim;
using phisim::expr::Bindings;
using phisim::expr::Expression;
using phisim::expr::ParseError;

namespace {

double eval(std::string_view src, const Bindings& b = {}) {
  return Expression::parse(src).evaluate(b);
}

}  // namespace

TEST_CASE("basic evaluation") {
  CHECK(eval("x^2", {{"x", 2.0}}) == 4.0);
  CHECK(eval("0.5*m*w^2*x^2", {{"m", 1.0}, {"w", 2.0}, {"x", 1.0}}) == 2.0);
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("-2^2") == -4.0);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("5 - 3 - 1") == 1.0);
  CHECK(eval("  2\t*\n3 ") == 6.0);
  CHECK(eval("1.5e2 + .5") == 150.5);
  CHECK(eval("pi") == doctest::Approx(3.141592653589793));
  CHECK(eval("pi", {{"pi", 3.0}}) == 3.0);
  CHECK(eval("sqrt(16) + abs(-2) + exp(0) + tanh(0) + cos(0) + sin(0)") == 8.0);
  CHECK(eval("--3") == 3.0);
}

TEST_CASE("syntax errors carry offsets") {
  try {
    Expression::parse("2+*3");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(Expression::parse(""), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1+2"), ParseError);
  CHECK_THROWS_AS(Expression::parse("1+2)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(1)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin 1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 $ 2"), ParseError);
  try {
    Expression::parse("1 + lg(2)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("unbound names are reported") {
  const auto e = Expression::parse("a + b");
  CHECK(e.free_names() == std::set<std::string>{"a", "b"});
  CHECK_THROWS_AS(e.evaluate({{"a", 1.0}}), InvalidArgument);
  CHECK(e.references("b"));
  CHECK_FALSE(e.references("t"));
}

TEST_CASE("print and reparse round trip") {
  const std::vector<std::string> sources = {
      "-x^2^0.5*sin(y)/(z+3) - -t",
      "0.5*m*w^2*(x - L/2)^2",
      "exp(-(x-a)^2/(2*s^2)) * cos(k*x)",
      "a - b - c - (a - b) / c / a",
      "tanh(abs(x) - y)^-1 * sqrt(abs(z))",
      "-(-(-x))",
  };
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (const auto& src : sources) {
    const auto e = Expression::parse(src);
    const auto again = Expression::parse(e.to_string());
    CHECK(again.to_string() == e.to_string());
    for (int trial = 0; trial < 100; ++trial) {
      Bindings b;
      for (const auto& name : e.free_names()) b[name] = u(rng);
      const double v1 = e.evaluate(b), v2 = again.evaluate(b);
      CHECK(std::abs(v1 - v2) <= 1e-15 * std::abs(v1));
    }
  }
}

TEST_CASE("compiled evaluation agrees with the tree") {
  const auto e = Expression::parse("a*x^2 - sin(y)/b + 3");
  const expr::Compiled c(e, {"x", "y"}, {{"a", 2.0}, {"b", 4.0}});
  const std::array<double, 2> slots{1.5, 0.7};
  CHECK(c(slots) == e.evaluate({{"a", 2.0}, {"b", 4.0}, {"x", 1.5}, {"y", 0.7}}));
  CHECK_THROWS_AS(expr::Compiled(e, {"x"}, {{"a", 1.0}, {"b", 1.0}}), InvalidArgument);
}

TEST_CASE("parse is total on random input") {
  const std::string alphabet = "0123456789.+-*/^() xyztpisncoexabqrth,e$";
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 24);
  int parsed = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
    try {
      const auto e = Expression::parse(s);
      (void)Expression::parse(e.to_string());
      ++parsed;
    } catch (const ParseError& err) {
      CHECK(err.offset() <= s.size());
    }
  }
  CHECK(parsed > 0);
  // pathological depth and length are rejected, not a stack overflow
  std::string chain = "1";
  for (int i = 0; i < 100000; ++i) chain += "+1";
  CHECK_THROWS_AS((void)Expression::parse(chain), ParseError);
  const std::string deep = std::string(100000, '(') + "1" + std::string(100000, ')');
  CHECK_THROWS_AS((void)Expression::parse(deep), ParseError);
  CHECK(eval(std::string(150, '(') + "1" + std::string(150, ')')) == 1.0);
}

TEST_CASE("sampling onto a grid") {
  const Grid g = Grid::line(16, 3.0);
  const auto zero = expr::sample(Expression::parse("0"), g, {}, 0.0);
  CHECK(max_abs(zero) == 0.0);

  const auto mode = expr::sample(Expression::parse("sin(2*pi*x/L)"), g, {{"L", 3.0}}, 0.0);
  const auto want = testing::sample_fn(g, [](double x, double, double) {
    return std::sin(2 * testing::kPi * x / 3.0);
  });
  CHECK(max_abs(mode - want) <= 1e-15);
  // Lx is bound automatically
  CHECK(max_abs(expr::sample(Expression::parse("sin(2*pi*x/Lx)"), g, {}, 0.0) - want) <= 1e-15);

  const auto tt = expr::sample(Expression::parse("t + x"), g, {}, 2.0);
  CHECK(tt[0] == doctest::Approx(2.0 + g.coordinate(0, 0)));

  // cell centers are 0.5, 1.5, 2.5, 3.5
  const Grid g4 = Grid::line(4, 4.0);
  CHECK_THROWS_AS(expr::sample(Expression::parse("1/(x-0.5)"), g4, {}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(expr::sample(Expression::parse("q*x"), g4, {}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(expr::sample(Expression::parse("y"), g4, {}, 0.0), InvalidArgument);
}
