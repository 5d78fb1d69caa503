#include <gtest/gtest.h>

#include <cmath>

#include "folia/expression.hpp"

using namespace folia;

TEST(Expression, ArithmeticAndPrecedence) {
  const Expression e = Expression::parse("1 + 2*3 - 4/2", 0);
  EXPECT_EQ(e(0.0, Vector(0)), 5.0);
  EXPECT_EQ(Expression::parse("-(2+3)*2", 0)(0.0, Vector(0)), -10.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2e-1 + .5", 0)(0.0, Vector(0)), 0.7);
  EXPECT_EQ(Expression::parse("pow(2, 10)", 0)(0.0, Vector(0)), 1024.0);
}

TEST(Expression, Variables) {
  const Expression e = Expression::parse("t*P1 + P2 - P", 2);
  Vector P(2);
  P << 3.0, 5.0;
  EXPECT_EQ(e(2.0, P), 2.0 * 3.0 + 5.0 - 3.0);
  EXPECT_EQ(Expression::parse("1+0.1*sin(t)", 0)(0.5, Vector(0)), 1.0 + 0.1 * std::sin(0.5));
  EXPECT_EQ(Expression::parse("I*cos(t)", 0, true)(1.0, Vector(0), 2.0), 2.0 * std::cos(1.0));
}

TEST(Expression, ExactGradients) {
  const Expression e = Expression::parse("cos(t*P1) + P1*P2/2 + pow(P2, 3)", 2);
  Vector P(2);
  P << 0.4, -1.1;
  const double t = 0.9;
  const Vector g = e.gradient_P(t, P);
  EXPECT_DOUBLE_EQ(g[0], -t * std::sin(t * P[0]) + P[1] / 2.0);
  EXPECT_NEAR(g[1], P[0] / 2.0 + 3.0 * P[1] * P[1], 1e-14);
  const Expression w = Expression::parse("1 + 0.1*sin(t) + 0.2*I*I", 0, true);
  EXPECT_NEAR(w.derivative_I(0.3, Vector(0), 1.5), 0.6, 1e-15);
}

TEST(Expression, Presets) {
  EXPECT_EQ(expand_preset("sum_cos", 2), "cos(t*P1)+cos(t*P2)");
  EXPECT_EQ(expand_preset("quadratic", 1), "P1*P1/2");
  EXPECT_EQ(expand_preset("P1", 3), "P1");
  const Expression e = Expression::parse(expand_preset("sum_cos", 3), 3);
  EXPECT_DOUBLE_EQ(e(1.0, Vector::Ones(3)), 3.0 * std::cos(1.0));
}

TEST(Expression, Rejections) {
  EXPECT_THROW(Expression::parse("1 +", 0), ExpressionError);
  EXPECT_THROW(Expression::parse("(1", 0), ExpressionError);
  EXPECT_THROW(Expression::parse("exp(t)", 0), ExpressionError);
  EXPECT_THROW(Expression::parse("P3", 2), ExpressionError);
  EXPECT_THROW(Expression::parse("P1", 0), ExpressionError);
  EXPECT_THROW(Expression::parse("I", 1), ExpressionError);
  EXPECT_THROW(Expression::parse("system(1)", 0), ExpressionError);
  EXPECT_THROW(Expression::parse("1 2", 0), ExpressionError);
}

TEST(Expression, WrongArity) {
  const Expression e = Expression::parse("P1+P2", 2);
  EXPECT_THROW(e(0.0, Vector::Ones(3)), DimensionError);
}
