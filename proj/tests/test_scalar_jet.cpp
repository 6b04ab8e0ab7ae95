/*
 * Copyright 2026 The pfsop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "pfsop/jet.hpp"
#include "pfsop/scalar.hpp"

using namespace pfsop;

namespace {

Jet<Rational> eps1(const ShapePtr& s, Rational c = 0) { return Jet<Rational>::variable(s, 1, c); }
Jet<Rational> eps2(const ShapePtr& s, Rational c = 0) { return Jet<Rational>::variable(s, 2, c); }

}  // namespace

TEST(Scalar, RationalParsingCanonicalises) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("+7"), Rational(7));
  EXPECT_EQ(parse_rational("-0/5"), Rational(0));
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational("3/0"), std::invalid_argument);
}

TEST(Scalar, GaussianFieldOps) {
  GaussianRational a(Rational(1), Rational(2)), b(Rational(3), Rational(-1));
  EXPECT_EQ(a * b, GaussianRational(Rational(5), Rational(5)));
  EXPECT_EQ((a / b) * b, a);
  EXPECT_EQ(conj(a), GaussianRational(Rational(1), Rational(-2)));
  EXPECT_EQ(a * conj(a), GaussianRational(Rational(5)));
  EXPECT_EQ(magnitude_exact(a), Rational(2));  // max norm, stays rational
}

TEST(Scalar, FloatModeIsFlaggedInexact) {
  EXPECT_TRUE(is_exact_v<Rational>);
  EXPECT_TRUE(is_exact_v<GaussianRational>);
  EXPECT_FALSE(is_exact_v<double>);
  EXPECT_FALSE(is_exact_v<Quad>);
  EXPECT_THROW(require_exact_mode(is_exact_v<double>, "Pfaffian identity"), std::logic_error);
  EXPECT_NO_THROW(require_exact_mode(is_exact_v<Rational>, "Pfaffian identity"));
}

TEST(Scalar, QuadConversionKeepsDoublePrecisionInputs) {
  const Quad q = from_rational<Quad>(Rational(1, 3));
  EXPECT_NEAR(static_cast<double>(q), 1.0 / 3.0, 1e-16);
  EXPECT_EQ(magnitude(Quad(-2)), 2.0);
}

TEST(Jet, DifferenceOfSquares) {
  auto s = JetShape::box(2, 1);
  Jet<Rational> one(s, 1);
  auto lhs = (one + eps1(s)) * (one - eps1(s));
  auto rhs = one - eps1(s) * eps1(s);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(lhs.extract(2, 0), Rational(-2));  // d^2/dt^2 of 1 - t^2
}

TEST(Jet, UnitIsNeutral) {
  auto s = JetShape::box(2, 1);
  auto a = eps1(s, 3) * eps2(s, Rational(1, 2));
  EXPECT_EQ(a * Jet<Rational>(s, 1), a);
}

TEST(Jet, TruncationDropsHighOrders) {
  auto s = JetShape::box(2, 0);
  auto e = eps1(s);
  EXPECT_TRUE((e * (e * e)).is_zero());
  EXPECT_FALSE((e * e).is_zero());
}

TEST(Jet, ExtractBasics) {
  auto s = JetShape::box(2, 1);
  auto j = Jet<Rational>(s, 5) + eps1(s) * Rational(7);
  EXPECT_EQ(j.extract(1, 0), Rational(7));
  EXPECT_EQ(j.extract(0, 0), Rational(5));
  EXPECT_EQ(j.extract(0, 1), Rational(0));
  EXPECT_THROW(j.extract(3, 0), std::out_of_range);
}

TEST(Jet, ProductAgainstHandExpansion) {
  // f = 2 + 3 t1 - t2, g = -1 + t1 + 4 t2:
  // fg = -2 - t1 + 9 t2 + 3 t1^2 + 11 t1 t2 - 4 t2^2 (t2^2 truncated at q=1).
  auto s = JetShape::box(2, 1);
  auto f = Jet<Rational>(s, 2) + eps1(s) * Rational(3) - eps2(s);
  auto g = Jet<Rational>(s, -1) + eps1(s) + eps2(s) * Rational(4);
  auto fg = f * g;
  EXPECT_EQ(fg.extract(0, 0), Rational(-2));
  EXPECT_EQ(fg.extract(1, 0), Rational(-1));
  EXPECT_EQ(fg.extract(0, 1), Rational(9));
  EXPECT_EQ(fg.extract(2, 0), Rational(6));   // 2! * 3
  EXPECT_EQ(fg.extract(1, 1), Rational(11));
  EXPECT_EQ(fg.extract(2, 1), Rational(0));
}

TEST(Jet, MismatchedTruncationsRefuseToMix) {
  auto a = Jet<Rational>(JetShape::box(2, 1), 1);
  auto b = Jet<Rational>(JetShape::box(1, 0), 1);
  EXPECT_THROW((void)(a + b), std::invalid_argument);
}

TEST(Jet, NewtonInverseIsExact) {
  auto s = JetShape::weighted(5);
  auto x = Jet<Rational>::variable(s, 1, 2) + Jet<Rational>::variable(s, 3, 0) * Rational(5, 3) +
           Jet<Rational>::variable(s, 2, 0) * Jet<Rational>::variable(s, 2, 0);
  auto inv = x.inverse();
  EXPECT_EQ(x * inv, Jet<Rational>(s, 1));
  // 1/(2 + t) = 1/2 - t/4 + t^2/8 - ...: the t^3 derivative is -6/16.
  auto y = Jet<Rational>::variable(s, 1, 2).inverse();
  EXPECT_EQ(y.extract({3, 0, 0, 0, 0}), Rational(-3, 8));
  EXPECT_THROW(Jet<Rational>::variable(s, 1, 0).inverse(), std::domain_error);
}

TEST(Jet, DerivativeMatchesExtract) {
  auto s = JetShape::box(2, 1);
  auto f = eps1(s, 1) * eps1(s, 1) * eps2(s, 3);  // (1+t1)^2 (3+t2)
  auto df = f.derivative(1);
  EXPECT_EQ(df.base(), f.extract(1, 0));
  EXPECT_EQ(df.extract(1, 0), f.extract(2, 0));
  EXPECT_EQ(df.extract(0, 1), f.extract(1, 1));
}

TEST(Jet, WeightedShapeCarriesHigherFlows) {
  auto s = JetShape::weighted(6);
  for (int l = 1; l <= 6; ++l) {
    ASSERT_TRUE(s->direction_of(l).has_value());
    EXPECT_EQ(s->cap(*s->direction_of(l)), 6 / l);
  }
  for (std::size_t i = 0; i < s->size(); ++i) EXPECT_LE(s->weight(i), 6);
}
