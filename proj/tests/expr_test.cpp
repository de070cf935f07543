// Copyright 2026 The lagcrit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lagcrit/expr.hpp"

namespace lagcrit {
namespace {

const std::vector<std::string> kXYZ{"x1", "x2", "x3"};
constexpr char kMinAreaObjective[] = "x1*x2 + 2*x1*x3 + 2*x2*x3";

// Random formulas over x1..x3 whose values stay in the domain for points in
// [-2, 2]^3 (no ln/sqrt/division of arbitrary subterms).
std::string random_formula(std::mt19937_64& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_int_distribution<int> var(1, 3);
  std::uniform_int_distribution<int> small(1, 4);
  const auto sub = [&] { return random_formula(gen, depth - 1); };
  switch (pick(gen)) {
    case 0: return "x" + std::to_string(var(gen));
    case 1: return std::to_string(small(gen)) + ".5";
    case 2: return "(" + sub() + " + " + sub() + ")";
    case 3: return "(" + sub() + " - " + sub() + ")";
    case 4: return "(" + sub() + " * " + sub() + ")";
    case 5: return "sin(" + sub() + ")^" + std::to_string(small(gen) - 1);
    case 6: return "sin(" + sub() + ")";
    case 7: return "cos(" + sub() + ")";
    case 8: return "-" + sub();
    default: return "exp(" + sub() + " / 4)";
  }
}

Vector random_point(std::mt19937_64& gen, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(gen), u(gen), u(gen)};
}

TEST(Parse, ConstraintOfBoxProblemVanishesAtOnes) {
  const Expression g = parse("x1*x2*x3 - 1", kXYZ);
  EXPECT_EQ(evaluate(g, Vector{1, 1, 1}), 0.0);
}

TEST(Parse, Identity) {
  const Expression e = parse("x1", {"x1"});
  EXPECT_EQ(evaluate(e, Vector{7}), 7.0);
  EXPECT_EQ(e.arity(), 1u);
}

TEST(Parse, SyntaxErrorOffset) {
  try {
    parse("x1 +* 2", {"x1"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kSyntax);
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse("x1 + y", {"x1"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kUnknownIdentifier);
    EXPECT_EQ(e.offset(), 5u);
  }
}

TEST(Parse, NonConstantExponentRejected) {
  try {
    parse("x1^x2", {"x1", "x2"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kNonConstantExponent);
  }
  // Constant subexpressions are fine.
  EXPECT_DOUBLE_EQ(evaluate(parse("x1^(1/2)", {"x1"}), Vector{9}), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("x1^-2", {"x1"}), Vector{2}), 0.25);
}

TEST(Parse, InvalidVariableLists) {
  EXPECT_THROW(parse("a", {"a", "a"}), ParseError);
  EXPECT_THROW(parse("a", {"1a"}), ParseError);
  EXPECT_THROW(parse("sin", {"sin"}), ParseError);
  EXPECT_THROW(parse("", {"a"}), ParseError);
  EXPECT_THROW(parse("(a", {"a"}), ParseError);
  EXPECT_THROW(parse("a)", {"a"}), ParseError);
  EXPECT_THROW(parse("foo(a)", {"a"}), ParseError);
}

TEST(Parse, Precedence) {
  const std::vector<std::string> v{"a", "b", "c"};
  const Vector x{2, 3, 4};
  EXPECT_DOUBLE_EQ(evaluate(parse("a + b * c", v), x), 14.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("(a + b) * c", v), x), 20.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("a - b - c", v), x), -5.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("c / a / a", v), x), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("-a^2", v), x), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("a^3^2", v), x), 512.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("2*-a", v), x), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("1e1 + .5", v), x), 10.5);
}

TEST(Evaluate, CounterexampleValue) {
  const Expression f = parse("x1^2 + x2^2*(1-x1)^3", {"x1", "x2"});
  EXPECT_EQ(evaluate(f, Vector{4, 1}), -11.0);
}

TEST(Evaluate, ZeroCoefficients) {
  const Expression e = parse("0*x1 + 0*x2^2 + 0*sin(x3)", kXYZ);
  EXPECT_EQ(evaluate(e, Vector{1.5, -2, 3}), 0.0);
}

TEST(Evaluate, MinimalSurfaceValue) {
  const double c = std::cbrt(2.0);
  const Expression f = parse(kMinAreaObjective, kXYZ);
  EXPECT_NEAR(evaluate(f, Vector{c, c, c / 2}), 3 * std::cbrt(4.0), 1e-12);
}

TEST(Evaluate, Functions) {
  const Expression e = parse("sin(x1) + cos(x2) + exp(x3) + ln(x1 + 1) + sqrt(x2 + 4)", kXYZ);
  const Vector x{0.5, 0.25, -1};
  const double expected =
      std::sin(0.5) + std::cos(0.25) + std::exp(-1.0) + std::log(1.5) + std::sqrt(4.25);
  EXPECT_NEAR(evaluate(e, x), expected, 1e-15);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(evaluate(parse("1/x1", {"x1"}), Vector{0}), DomainError);
  EXPECT_THROW(evaluate(parse("ln(x1)", {"x1"}), Vector{0}), DomainError);
  EXPECT_THROW(evaluate(parse("ln(x1)", {"x1"}), Vector{-1}), DomainError);
  EXPECT_THROW(evaluate(parse("sqrt(x1)", {"x1"}), Vector{-1}), DomainError);
  EXPECT_THROW(evaluate(parse("x1^0.5", {"x1"}), Vector{-1}), DomainError);
  EXPECT_THROW(evaluate(parse("x1^-1", {"x1"}), Vector{0}), DomainError);
  EXPECT_THROW(evaluate(parse("exp(x1)", {"x1"}), Vector{1000}), DomainError);
  EXPECT_EQ(evaluate(parse("sqrt(x1)", {"x1"}), Vector{0}), 0.0);
  EXPECT_EQ(evaluate(parse("x1^3", {"x1"}), Vector{-2}), -8.0);
}

TEST(Evaluate, DomainErrorNamesSubexpression) {
  try {
    evaluate(parse("x1 + ln(x2 - 1)", {"x1", "x2"}), Vector{0, 1});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subexpression(), "ln((x2-1))");
  }
}

TEST(Evaluate, WrongDimensionRejected) {
  EXPECT_THROW(evaluate(parse("x1", {"x1"}), Vector{1, 2}), std::invalid_argument);
}

TEST(Gradient, MinAreaObjective) {
  const Vector g = gradient(parse(kMinAreaObjective, kXYZ), Vector{1, 1, 1});
  EXPECT_EQ(g, (Vector{3, 3, 4}));
}

TEST(Gradient, ConstantIsZero) {
  const Vector g = gradient(parse("3*4 - sin(2)", kXYZ), Vector{0.1, 2, -7});
  EXPECT_EQ(g, (Vector{0, 0, 0}));
}

TEST(Gradient, CubicObjective) {
  const Vector g = gradient(parse("x2 - x1^3 + x1", {"x1", "x2"}), Vector{-1.0 / 3, 1.0 / 9});
  EXPECT_NEAR(g[0], 2.0 / 3, 1e-15);
  EXPECT_EQ(g[1], 1.0);
}

TEST(Hessian, MinAreaObjectiveIsConstant) {
  const Expression f = parse(kMinAreaObjective, kXYZ);
  const Matrix expected{{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  EXPECT_EQ(hessian(f, Vector{1, 1, 1}), expected);
  EXPECT_EQ(hessian(f, Vector{-3, 0.5, 7}), expected);
}

TEST(Hessian, LinearIsZero) {
  EXPECT_EQ(hessian(parse("2*x1 - x2 + 0.5*x3 + 1", kXYZ), Vector{1, 2, 3}), Matrix(3, 3));
}

TEST(Hessian, TripleProduct) {
  const Vector x{0.7, -1.3, 2.9};
  const Matrix h = hessian(parse("x1*x2*x3 - 1", kXYZ), x);
  const Matrix expected{{0, x[2], x[1]}, {x[2], 0, x[0]}, {x[1], x[0], 0}};
  EXPECT_EQ(h, expected);
}

TEST(Hessian, TranscendentalAgainstHandDerivatives) {
  // f = exp(x1) * sin(x2): f11 = e sin, f12 = e cos, f22 = -e sin.
  const Vector x{0.3, 1.1};
  const Matrix h = hessian(parse("exp(x1)*sin(x2)", {"x1", "x2"}), x);
  const double e = std::exp(0.3);
  EXPECT_NEAR(h(0, 0), e * std::sin(1.1), 1e-14);
  EXPECT_NEAR(h(0, 1), e * std::cos(1.1), 1e-14);
  EXPECT_NEAR(h(1, 1), -e * std::sin(1.1), 1e-14);
}

TEST(SecondOrder, MatchesSeparateCalls) {
  const Expression f = parse("x1^2*ln(x2) + sqrt(x3)/x1", kXYZ);
  const Vector x{1.5, 2.5, 0.7};
  const SecondOrder s = second_order(f, x);
  EXPECT_EQ(s.value, evaluate(f, x));
  EXPECT_EQ(s.gradient, gradient(f, x));
  EXPECT_EQ(s.hessian, hessian(f, x));
}

TEST(FiniteDifference, QuadraticGradient) {
  const Vector g = fd_gradient(parse("x1^2", {"x1"}), Vector{3}, 1e-5);
  EXPECT_NEAR(g[0], 6.0, 1e-8);
}

TEST(FiniteDifference, MinAreaAgreesWithForwardMode) {
  const Expression f = parse(kMinAreaObjective, kXYZ);
  const Vector x{1, 2, 0.5};
  const Vector ad = gradient(f, x);
  const Vector fd = fd_gradient(f, x);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(ad[i] - fd[i]) / std::abs(ad[i]), 1e-6);
}

TEST(FiniteDifference, LinearHessianNearZero) {
  const Matrix h = fd_hessian(parse("2*x1 - x2 + 0.5*x3 + 1", kXYZ), Vector{1, 2, 3});
  for (double v : h.data()) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(Properties, HessianExactlySymmetric) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = parse(random_formula(gen, 4), kXYZ);
    const Matrix h = hessian(e, random_point(gen));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) ASSERT_EQ(h(i, j), h(j, i)) << e.serialize();
  }
}

TEST(Properties, SerializeRoundTrip) {
  std::mt19937_64 gen(12);
  const std::vector<std::string> fixed{
      "x1^2 + x2^2*(1-x1)^3", "-x1^-2", "x1 - -x2", "1e-300*x3", "0.1 + 0.2", "(1/7)*x1^7 - (17/12)*x1^6",
      "sqrt(ln(exp(x1)))", "x1/(x2/x3)", "-(x1+x2)^0.5"};
  std::vector<std::string> texts = fixed;
  for (int i = 0; i < 200; ++i) texts.push_back(random_formula(gen, 5));
  for (const auto& t : texts) {
    const Expression e = parse(t, kXYZ);
    const Expression again = parse(e.serialize(), kXYZ);
    EXPECT_EQ(e, again) << t << " -> " << e.serialize();
    EXPECT_EQ(e.serialize(), again.serialize());
  }
}

TEST(Properties, GradientOfSumIsSumOfGradients) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string a = random_formula(gen, 4);
    const std::string b = random_formula(gen, 4);
    const Vector x = random_point(gen);
    const Vector ga = gradient(parse(a, kXYZ), x);
    const Vector gb = gradient(parse(b, kXYZ), x);
    const Vector gs = gradient(parse("(" + a + ") + (" + b + ")", kXYZ), x);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_NEAR(gs[i], ga[i] + gb[i], 1e-12 * (1 + std::abs(ga[i]) + std::abs(gb[i])));
  }
}

TEST(Properties, ForwardModeAgreesWithFiniteDifferences) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = parse(random_formula(gen, 3), kXYZ);
    const Vector x = random_point(gen);
    const Vector ad = gradient(e, x);
    const Vector fd = fd_gradient(e, x);
    const Matrix adh = hessian(e, x);
    const Matrix fdh = fd_hessian(e, x);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(ad[i] - fd[i]), 1e-5 * (1 + std::abs(ad[i])));
    for (std::size_t k = 0; k < 9; ++k)
      EXPECT_LE(std::abs(adh.data()[k] - fdh.data()[k]), 1e-4 * (1 + std::abs(adh.data()[k])))
          << e.serialize();
  }
}

TEST(Identifier, Rules) {
  EXPECT_TRUE(is_identifier("x1"));
  EXPECT_TRUE(is_identifier("_a_b"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("exp"));
  EXPECT_FALSE(is_identifier("a-b"));
}

}  // namespace
}  // namespace lagcrit
