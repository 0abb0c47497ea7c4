#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "pcvx/battery.hpp"
#include "pcvx/expr.hpp"
#include "support.hpp"

using namespace pcvx;

namespace {

Real eval1(const std::string& src, Real t) { return parse(src, 1)(t); }

Real eval2(const FunctionAst& f, Real a, Real b) {
  const Real p[2] = {a, b};
  return f.evaluate(p).value;
}

}  // namespace

TEST(Parse, CubeEvaluatesToEight) { EXPECT_EQ(eval1("t^3", 2), 8); }

TEST(Parse, PiecewiseElseBranchAtBoundary) {
  const FunctionAst f = parse("piecewise(t<0: 1, else: t)", 1);
  EXPECT_EQ(f(0), 0);
  EXPECT_EQ(f(-1e-9L), 1);
  EXPECT_EQ(f(0.5L), 0.5L);
}

TEST(Parse, Paraboloid) {
  const FunctionAst f = parse("x1^2 + x2^2", 2);
  EXPECT_EQ(f.arity(), 2);
  EXPECT_EQ(eval2(f, 3, 4), 25);
}

TEST(Parse, LogOfNegativeIsUndefined) {
  const FunctionAst f = parse("log(t)", 1);
  const Real p[1] = {-1};
  EXPECT_FALSE(f.evaluate(p).defined());
}

TEST(Parse, DomainViolationsAreUndefined) {
  EXPECT_TRUE(std::isnan(eval1("log(t)", 0)));
  EXPECT_TRUE(std::isnan(eval1("sqrt(t)", -1e-300L)));
  EXPECT_TRUE(std::isnan(eval1("1/t", 0)));
  EXPECT_TRUE(std::isnan(eval1("t^(-1)", 0)));
  EXPECT_EQ(eval1("sqrt(t)", 0), 0);
  EXPECT_EQ(eval1("log(t)", 1), 0);
}

TEST(Parse, ExtendedRealsAreFirstClass) {
  EXPECT_EQ(eval1("inf", 0), kInf);
  EXPECT_EQ(eval1("-inf + t", 3), -kInf);
  EXPECT_EQ(eval1("exp(t)", 1e6L), kInf);
  const Real p[1] = {0};
  EXPECT_TRUE(parse("inf", 1).evaluate(p).pos_inf());
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(eval1("2 + 3*4", 0), 14);
  EXPECT_EQ(eval1("-t^2", 3), -9);
  EXPECT_EQ(eval1("2^3^2", 0), 512);
  EXPECT_EQ(eval1("8/4/2", 0), 1);
  EXPECT_EQ(eval1("1 - 2 - 3", 0), -4);
  EXPECT_EQ(eval1("(1 - 2) * -3", 0), 3);
  EXPECT_EQ(eval1("2*t^2", 3), 18);
}

TEST(Parse, FunctionsAndConstants) {
  EXPECT_NEAR(static_cast<double>(eval1("sin(pi/2) + cos(0)", 0)), 2.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(eval1("log(e)", 0)), 1.0, 1e-15);
  EXPECT_EQ(eval1("min(3, t, 5)", 1), 1);
  EXPECT_EQ(eval1("max(3, t, 5)", 9), 9);
  EXPECT_EQ(eval1("abs(t)", -2.5L), 2.5L);
  EXPECT_EQ(eval1("x^2", 3), 9);
}

TEST(Parse, PiecewiseFirstMatchingBranchWins) {
  const FunctionAst f = parse("piecewise(t <= 0: 10, t <= 1: 20, t <= 0.5: 30, else: 40)", 1);
  EXPECT_EQ(f(-1), 10);
  EXPECT_EQ(f(0), 10);
  EXPECT_EQ(f(0.5L), 20);
  EXPECT_EQ(f(1), 20);
  EXPECT_EQ(f(2), 40);
}

TEST(Parse, GuardConnectives) {
  const FunctionAst f = parse("piecewise(t > -1 && t < 1: 0, t == 5 || t != t: 2, else: 1)", 1);
  EXPECT_EQ(f(0), 0);
  EXPECT_EQ(f(5), 2);
  EXPECT_EQ(f(-1), 1);
  EXPECT_EQ(f(3), 1);
}

TEST(ParseErrors, SyntaxErrorReportsByteOffset) {
  try {
    (void)parse("t + * 2", 1);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::syntax);
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(ParseErrors, UnknownIdentifier) {
  try {
    (void)parse("tan(t)", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::unknown_identifier);
    EXPECT_EQ(e.offset(), 0u);
  }
  EXPECT_THROW((void)parse("y + 1", 1), ParseError);
}

TEST(ParseErrors, ArityMismatch) {
  try {
    (void)parse("x1 + x3", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::arity_mismatch);
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW((void)parse("t + x1", 2), ParseError);
}

TEST(ParseErrors, Malformed) {
  EXPECT_THROW((void)parse("", 1), ParseError);
  EXPECT_THROW((void)parse("   ", 1), ParseError);
  EXPECT_THROW((void)parse("(t", 1), ParseError);
  EXPECT_THROW((void)parse("t)", 1), ParseError);
  EXPECT_THROW((void)parse("piecewise(t < 0: 1)", 1), ParseError);
  EXPECT_THROW((void)parse("piecewise(t: 1, else: 2)", 1), ParseError);
  EXPECT_THROW((void)parse("min(t)", 1), ParseError);
  EXPECT_THROW((void)parse("abs(t, t)", 1), ParseError);
  EXPECT_THROW((void)parse("1.2.3", 1), ParseError);
  EXPECT_THROW((void)parse("t", 0), std::invalid_argument);
}

TEST(Evaluate, PointLengthMustMatchArity) {
  const FunctionAst f = parse("x1 + x2", 2);
  const Real p[1] = {1};
  EXPECT_THROW((void)f.evaluate(p), std::invalid_argument);
}

TEST(Evaluate, IsPure) {
  const FunctionAst f = parse("piecewise(t < 0: sin(t)*exp(t), else: sqrt(t) + log(1 + t))", 1);
  for (Real t : test::uniform_points(50, -3, 3, 5)) {
    const Real a = f(t);
    const Real b = f(t);
    EXPECT_EQ(std::memcmp(&a, &b, 10), 0);
  }
}

TEST(Evaluate, ConcurrentEvaluationMatchesSequential) {
  const FunctionAst f = parse("x1^3 - 2*x1*x2 + max(abs(x2), 0.5)", 2);
  const auto xs = test::uniform_points(400, -2, 2, 9);
  std::vector<Real> seq(200);
  for (std::size_t i = 0; i < 200; ++i) seq[i] = eval2(f, xs[2 * i], xs[2 * i + 1]);
  std::vector<Real> par(200);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < 200; i += 4) par[i] = eval2(f, xs[2 * i], xs[2 * i + 1]);
    });
  }
  for (auto& t : pool) t.join();
  EXPECT_EQ(seq, par);
}

TEST(Evaluate, PolynomialTextMatchesHorner) {
  for (const test::Poly& p : test::fixed_polynomials()) {
    const FunctionAst f = parse(p.text(), 1);
    for (Real t : test::uniform_points(20, -2, 2, 3)) {
      EXPECT_NEAR(static_cast<double>(f(t)), static_cast<double>(p.value(t)), 1e-12) << p.text();
    }
  }
}

// Printing then reparsing preserves evaluation on 100 random points.
TEST(RoundTrip, PrintedFormReparsesToSameValues) {
  std::vector<std::string> sources = {
      "t^3",
      "-t^2",
      "piecewise(t<0: 1, else: t)",
      "piecewise(t <= 0: -t, t < 0.5 && t != 0.25: 2*t, else: 1)",
      "max(0, abs(t) - 1)",
      "sqrt(abs(t)) + log(1 + t^2) - exp(-t)/3",
      "min(sin(t), cos(t), t/7)",
      "2^-t + (-3)^2 - -t",
      "t^4 - t^2 + 1e-3*t",
  };
  for (std::size_t i = 0; i < 30; ++i) sources.push_back(random_piecewise_cubic(77, i).expression);
  const auto points = test::uniform_points(100, -2, 2, 1);
  for (const std::string& s : sources) {
    const FunctionAst f = parse(s, 1);
    const FunctionAst g = parse(f.to_string(), 1);
    for (Real t : points) {
      const Real a = f(t);
      const Real b = g(t);
      if (std::isnan(a)) {
        EXPECT_TRUE(std::isnan(b)) << s;
      } else {
        EXPECT_LE(std::fabs(a - b), 1e-12L * (1 + std::fabs(a))) << s << " printed as " << f.to_string();
      }
    }
  }
}

TEST(RoundTrip, MultivariatePrintedForm) {
  const FunctionAst f = parse("max(abs(x1), abs(x2)) - x1*x2/(1 + x2^2)", 2);
  const FunctionAst g = parse(f.to_string(), 2);
  const auto pts = test::uniform_points(200, -1, 1, 4);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(eval2(f, pts[2 * i], pts[2 * i + 1]), eval2(g, pts[2 * i], pts[2 * i + 1]));
  }
}
