#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ym/error.hpp"
#include "ym/expr.hpp"

using namespace ym;

namespace {

Expr C(double v) { return Expr::constant(v); }
Expr X() { return Expr::variable(); }

}  // namespace

TEST(Parse, ProductOfConstantAndVariable) {
  EXPECT_EQ(parse("3*x"), Expr::binary(Op::mul, C(3), X()));
}

TEST(Parse, SineOfScaledVariable) {
  const Expr expected = Expr::function(
      Op::sin, Expr::binary(Op::mul, Expr::binary(Op::mul, C(2), Expr::pi()), X()));
  EXPECT_EQ(parse("sin(2*pi*x)"), expected);
}

TEST(Parse, SyntaxErrorCarriesOffset) {
  try {
    parse("3*/x");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, UnknownIdentifier) {
  EXPECT_THROW(parse("tan(x)"), UnknownIdentifierError);
  EXPECT_THROW(parse("y + 1"), UnknownIdentifierError);
  EXPECT_NO_THROW(parse("y + 1", {.variable = "y"}));
}

TEST(Parse, Rejects) {
  for (const char* bad : {"", "   ", "(x", "x)", "x^", "x^1.5", "sin x", "3 x", "1e", "--x"}) {
    EXPECT_THROW(parse(bad), ParseError) << bad;
  }
}

TEST(Parse, FractionLiteralsFold) {
  EXPECT_EQ(parse("2/3"), C(2.0 / 3.0));
  EXPECT_EQ(parse("-3/2*x"), Expr::binary(Op::mul, C(-1.5), X()));
  // Parenthesized operands are not literals.
  EXPECT_EQ(parse("(2)/3").op(), Op::div);
}

TEST(Parse, WhitespaceInsignificant) {
  EXPECT_EQ(parse(" 3 *\tx\n"), parse("3*x"));
}

TEST(Parse, ScientificNotation) {
  EXPECT_EQ(parse("1.5e-3"), C(1.5e-3));
  EXPECT_EQ(parse("2E2*x"), Expr::binary(Op::mul, C(200), X()));
}

TEST(ParseConstant, Values) {
  EXPECT_DOUBLE_EQ(parse_constant("2/3"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(parse_constant("pi/4"), std::numbers::pi / 4);
  EXPECT_THROW(parse_constant("x"), UnknownIdentifierError);
}

TEST(Evaluate, LinearBranches) {
  EXPECT_DOUBLE_EQ(evaluate(parse("3*x"), 1.0 / 6.0), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse("(3/2)*x + 1/4"), 0.5), 1.0);
  EXPECT_EQ(evaluate(parse("sin(2*pi*x)"), 0.0), 0.0);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(evaluate(parse("ln(x)"), 0.0), DomainError);
  EXPECT_THROW(evaluate(parse("ln(x)"), -1.0), DomainError);
  EXPECT_THROW(evaluate(parse("sqrt(x)"), -1e-3), DomainError);
  EXPECT_THROW(evaluate(parse("1/x"), 0.0), DomainError);
  EXPECT_THROW(evaluate(parse("x^-1"), 0.0), DomainError);
  EXPECT_THROW(evaluate(parse("exp(x)"), 1000.0), DomainError);
  try {
    evaluate(parse("2 + ln(x - 1)"), 0.5);
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subtree(), "ln(x - 1)");
  }
}

TEST(Evaluate, Functions) {
  EXPECT_DOUBLE_EQ(evaluate(parse("abs(x) + sqrt(x^2)"), -2.0), 4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("exp(ln(x))"), 3.0), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("cos(pi*x)"), 1.0), -1.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("-x^2"), 3.0), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("2^-2"), 0.0), 0.25);
}

TEST(Evaluate, BitIdenticalRepeats) {
  const Expr e = parse("sin(2*pi*x)*exp(x) / (1 + x^2)");
  for (double x : {0.1, 0.37, 2.5}) EXPECT_EQ(evaluate(e, x), evaluate(e, x));
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(differentiate(parse("3*x")), C(3));
  EXPECT_EQ(differentiate(parse("sin(2*pi*x)")), parse("2*pi*cos(2*pi*x)"));
  EXPECT_EQ(differentiate(parse("x^2")), parse("2*x"));
}

TEST(Differentiate, AbsAtZeroIsDomainError) {
  const Expr d = differentiate(parse("abs(x)"));
  EXPECT_DOUBLE_EQ(evaluate(d, -2.0), -1.0);
  EXPECT_THROW(evaluate(d, 0.0), DomainError);
}

TEST(Render, Examples) {
  EXPECT_EQ(render(parse("3*x")), "3*x");
  EXPECT_EQ(render(parse("3/2*x + 1/4")), "1.5*x + 0.25");
  EXPECT_EQ(render(parse("-(x+1)^2")), "-(x + 1)^2");
  EXPECT_EQ(render(parse("x - (x - 1)")), "x - (x - 1)");
  EXPECT_EQ(render(parse("y^3", {.variable = "y"}), "y"), "y^3");
}

TEST(Substitute, AffineComposition) {
  const Expr e = substitute(parse("3*x"), affine(2.0, -1.0));
  EXPECT_DOUBLE_EQ(evaluate(e, 0.75), 3.0 * 0.5);
  EXPECT_EQ(substitute(parse("sin(x)"), X()), parse("sin(x)"));
}

// ---------------------------------------------------------------------------
// Property tests over random trees.

namespace {

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 12);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  switch (pick(rng)) {
    case 0: return X();
    case 1: return C(std::round(value(rng) * 8.0) / 8.0);
    case 2: return Expr::pi();
    case 3: return Expr::negate(random_expr(rng, depth - 1));
    case 4: return Expr::binary(Op::add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return Expr::binary(Op::sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return Expr::binary(Op::mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: return Expr::binary(Op::div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 8:
      return Expr::power(random_expr(rng, depth - 1),
                         std::uniform_int_distribution<int>(-2, 3)(rng));
    case 9: return Expr::function(Op::sin, random_expr(rng, depth - 1));
    case 10: return Expr::function(Op::cos, random_expr(rng, depth - 1));
    case 11: return Expr::function(Op::exp, random_expr(rng, depth - 1));
    default: return Expr::function(Op::abs, random_expr(rng, depth - 1));
  }
}

// Smooth trees for derivative checks: no abs, no division, no negative powers.
Expr random_smooth(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return X();
    case 1: return C(value(rng));
    case 2: return make_neg(random_smooth(rng, depth - 1));
    case 3: return make_add(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 4: return make_sub(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 5: return make_mul(random_smooth(rng, depth - 1), random_smooth(rng, depth - 1));
    case 6: return make_pow(random_smooth(rng, depth - 1), std::uniform_int_distribution<int>(2, 3)(rng));
    case 7: return Expr::function(Op::sin, random_smooth(rng, depth - 1));
    default: return Expr::function(Op::cos, random_smooth(rng, depth - 1));
  }
}

}  // namespace

TEST(Property, RenderParseRoundTrip) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = random_expr(rng, 4);
    const std::string text = render(e);
    EXPECT_EQ(parse(text), e) << text;
  }
}

TEST(Property, RoundTripInOtherVariable) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Expr e = random_expr(rng, 3);
    EXPECT_EQ(parse(render(e, "y"), {.variable = "y"}), e);
  }
}

TEST(Property, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> point(-1.5, 1.5);
  constexpr double h = 1e-5;
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const Expr e = random_smooth(rng, 3);
    const Expr d = differentiate(e);
    for (int j = 0; j < 100; ++j) {
      const double x = point(rng);
      const double fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h);
      const double exact = evaluate(d, x);
      const double scale = std::max(std::fabs(exact), 1.0);
      // Central differences carry O(h²·f''') truncation plus rounding; the
      // trees are bounded so the relative form with an absolute floor works.
      if (std::fabs(exact) < 1e-3) {
        EXPECT_NEAR(fd, exact, 1e-6 * scale + 1e-9) << render(e) << " at " << x;
      } else {
        EXPECT_NEAR(fd, exact, 1e-6 * scale) << render(e) << " at " << x;
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 6000);
}
