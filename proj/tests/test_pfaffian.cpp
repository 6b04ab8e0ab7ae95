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

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "pfsop/generators.hpp"
#include "pfsop/indexed.hpp"
#include "pfsop/linalg.hpp"
#include "pfsop/pfaffian.hpp"

using namespace pfsop;

namespace {

SkewMatrix<Rational> upper4(const std::array<Rational, 6>& e) {
  SkewMatrix<Rational> a(4, Rational(0));
  a.set(0, 1, e[0]), a.set(0, 2, e[1]), a.set(0, 3, e[2]);
  a.set(1, 2, e[3]), a.set(1, 3, e[4]), a.set(2, 3, e[5]);
  return a;
}

MomentSystem<Rational> sample(Constraint kind, std::uint64_t seed, int max_index = 12) {
  GenParams p;
  p.kind = kind;
  p.seed = seed;
  p.max_index = max_index;
  return generate(p);
}

}  // namespace

TEST(Pfaffian, EmptyMatrixIsOne) {
  SkewMatrix<Rational> a(0, Rational(0));
  EXPECT_EQ(pfaffian_expand(a), Rational(1));
  EXPECT_EQ(pfaffian_reduce(a), Rational(1));
}

TEST(Pfaffian, TwoByTwoIsTheEntry) {
  SkewMatrix<Rational> a(2, Rational(0));
  a.set(0, 1, Rational(-5, 3));
  EXPECT_EQ(pfaffian(a), Rational(-5, 3));
  EXPECT_EQ(a.at(1, 0), Rational(5, 3));
}

TEST(Pfaffian, FourByFourClassicalFormula) {
  const std::array<Rational, 6> e = {Rational(2), Rational(-1, 2), Rational(3), Rational(7, 5), Rational(-4), Rational(1, 9)};
  const Rational want = e[0] * e[5] - e[1] * e[4] + e[2] * e[3];
  EXPECT_EQ(pfaffian_expand(upper4(e)), want);
  EXPECT_EQ(pfaffian_reduce(upper4(e)), want);
}

TEST(Pfaffian, FourByFourNeedsPivotSwap) {
  // a01 = 0 forces the eliminator to pick another partner.
  const std::array<Rational, 6> e = {Rational(0), Rational(3), Rational(2), Rational(5), Rational(-1), Rational(0)};
  const Rational want = -e[1] * e[4] + e[2] * e[3];
  EXPECT_EQ(pfaffian_reduce(upper4(e)), want);
  EXPECT_EQ(pfaffian_expand(upper4(e)), want);
}

TEST(Pfaffian, OddDimensionRejected) {
  SkewMatrix<Rational> a(3, Rational(0));
  EXPECT_THROW(pfaffian_expand(a), std::invalid_argument);
  EXPECT_THROW(pfaffian_reduce(a), std::invalid_argument);
}

TEST(Pfaffian, DiagonalWriteRejected) {
  SkewMatrix<Rational> a(4, Rational(0));
  EXPECT_THROW(a.set(2, 2, Rational(1)), std::invalid_argument);
}

TEST(PfaffianOracle, DeterminantOraclesAgree) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    auto a = oracle::random_skew(rng, n);
    // random_skew is skew; perturb the diagonal so odd sizes are nontrivial
    for (std::size_t i = 0; i < n; ++i) a[i][i] = Rational(static_cast<long>(i) - 2, 3);
    EXPECT_EQ(oracle::bareiss_det(a), oracle::leibniz_det(a)) << "n=" << n;
  }
}

TEST(PfaffianOracle, MatchingSumAgreesOnSmallSizes) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    auto a = oracle::random_skew(rng, n);
    EXPECT_EQ(pfaffian_expand(oracle::to_skew<Rational>(a)), oracle::matching_pfaffian(a)) << n;
  }
}

TEST(Pfaffian, SquareIsDeterminantForRandomRationals) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 * (1 + trial % 5);  // 2..10
    auto a = oracle::random_skew(rng, n);
    auto s = oracle::to_skew<Rational>(a);
    const Rational pe = pfaffian_expand(s), pr = pfaffian_reduce(s);
    ASSERT_EQ(pe, pr) << "trial " << trial;
    ASSERT_EQ(pe * pe, oracle::bareiss_det(a)) << "trial " << trial;
  }
}

TEST(Pfaffian, SparseMatricesHitTheExpansionFallback) {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = oracle::random_skew(rng, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        if (!keep(rng)) a[i][j] = a[j][i] = 0;
    auto s = oracle::to_skew<Rational>(a);
    const Rational pr = pfaffian_reduce(s);
    EXPECT_EQ(pr, pfaffian_expand(s));
    EXPECT_EQ(pr * pr, oracle::bareiss_det(a));
  }
}

TEST(Pfaffian, FirstRowExpansionRecurrence) {
  std::mt19937_64 rng(3);
  auto a = oracle::random_skew(rng, 8);
  auto s = oracle::to_skew<Rational>(a);
  Rational sum = 0;
  for (std::size_t j = 1; j < 8; ++j) {
    std::vector<std::size_t> rest;
    for (std::size_t q = 1; q < 8; ++q)
      if (q != j) rest.push_back(q);
    const Rational t = a[0][j] * pfaffian_reduce(s.select(rest));
    sum += (j % 2) ? t : Rational(-t);
  }
  EXPECT_EQ(sum, pfaffian_reduce(s));
}

TEST(Pfaffian, DoubleEliminationMatchesExact) {
  std::mt19937_64 rng(17);
  auto a = oracle::random_skew(rng, 10);
  SkewMatrix<double> d(10, 0.0);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j) d.set(i, j, a[i][j].get_d());
  const double exact = pfaffian_expand(oracle::to_skew<Rational>(a)).get_d();
  EXPECT_NEAR(pfaffian_reduce(d), exact, 1e-10 * std::fabs(exact));
}

TEST(Pfaffian, JetEntriesAgreeAcrossAlgorithms) {
  auto sys = sample(Constraint::none, 4);
  PfaffianContext<Rational, Jet<Rational>> ctx(sys, JetShape::box(2, 1));
  SkewMatrix<Jet<Rational>> a(6, ctx.zero());
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) a.set(i, j, ctx.pf({Label::idx(int(i)), Label::idx(int(j))}));
  EXPECT_EQ(pfaffian_reduce(a), pfaffian_expand(a));
}

TEST(Pfaffian, DeterminantOfLibraryMatchesBareiss) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    auto a = oracle::random_skew(rng, 7);
    for (std::size_t i = 0; i < 7; ++i) a[i][i] = Rational(t - static_cast<int>(i));
    EXPECT_EQ(determinant(a), oracle::bareiss_det(a));
  }
}

TEST(PfIndexed, EntryRules) {
  auto sys = sample(Constraint::none, 21);
  PfaffianContext<Rational> ctx(sys);
  EXPECT_EQ(ctx.pf(range(0, 1)), sys.mu(0, 1));
  // Pf(d,0,1,z) = beta_0 z - beta_1, using Pf(d,z) = 0.
  auto p = ctx.pf_indexed({Label::d(), Label::idx(0), Label::idx(1), Label::z()});
  EXPECT_EQ(p, Poly<Rational>(Rational(0), {-sys.beta(1, 1), sys.beta(1, 0)}));
  auto q = ctx.pf_indexed({Label::idx(3), Label::z()});
  EXPECT_EQ(q, Poly<Rational>::monomial(Rational(0), 3, Rational(1)));
  EXPECT_EQ(ctx.tau(0, 5), Rational(1));
  EXPECT_EQ(ctx.tau(2, 1), sys.mu(1, 2));
  EXPECT_EQ(ctx.tau(1, 2), sys.beta(1, 2));
  EXPECT_EQ(ctx.tau(-1, 0), Rational(0));
  EXPECT_EQ(ctx.tau(4, 0), sys.mu(0, 1) * sys.mu(2, 3) - sys.mu(0, 2) * sys.mu(1, 3) + sys.mu(0, 3) * sys.mu(1, 2));
}

TEST(PfIndexed, ForbiddenLabelLists) {
  GenParams gp;
  gp.kind = Constraint::rank1skew_multi;
  gp.components = 2;
  gp.seed = 2;
  auto sys = generate(gp);
  PfaffianContext<Rational> ctx(sys);
  EXPECT_THROW(ctx.pf({Label::d(1), Label::d(2)}), std::invalid_argument);
  EXPECT_THROW(ctx.pf_z({Label::z(), Label::idx(0), Label::idx(1), Label::z()}), std::invalid_argument);
  EXPECT_THROW(ctx.pf({Label::d0(), Label::idx(1)}), std::invalid_argument);  // not rank2
  EXPECT_THROW(ctx.pf({Label::idx(0), Label::idx(sys.max_index() + 1)}), std::out_of_range);
  EXPECT_THROW(ctx.pf({Label::d(3), Label::idx(0)}), std::out_of_range);
  EXPECT_THROW(ctx.pf(range(0, 2)), std::invalid_argument);
}

TEST(PfIndexed, DerivativeLabelsReproduceTheShift) {
  // Pf(d_0,d_1,i,j) = mu_{i+1,j} + mu_{i,j+1} under the rank-two constraint.
  auto sys = sample(Constraint::rank2, 6);
  PfaffianContext<Rational> ctx(sys);
  EXPECT_EQ(ctx.pf({Label::d0(), Label::d1()}), Rational(0));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 6; ++j)
      EXPECT_EQ(ctx.pf({Label::d0(), Label::d1(), Label::idx(i), Label::idx(j)}), sys.mu(i + 1, j) + sys.mu(i, j + 1))
          << i << "," << j;
}

TEST(PfIndexed, ThreeTermIdentityOnRandomMoments) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = sample(Constraint::none, seed);
    PfaffianContext<Rational> ctx(sys);
    for (int r = 1; r <= 3; r += 2) {
      const Labels star = range(0, r - 1);  // odd length r
      const Label a = Label::idx(r), b = Label::idx(r + 1), c = Label::idx(r + 2), z = Label::z();
      auto lhs = ctx.pf_z(star + b + c + z) * ctx.pf(a + star);
      auto rhs = ctx.pf_z(a + star + c + z) * ctx.pf(star + b) - ctx.pf_z(a + star + b + z) * ctx.pf(star + c) +
                 ctx.pf_z(star + z) * ctx.pf(a + star + b + c);
      EXPECT_EQ(lhs, rhs) << "seed " << seed << " r " << r;
    }
  }
}

TEST(Pfaffian, AcceptanceBudget) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracle::random_skew(rng, 10);
    auto s = oracle::to_skew<Rational>(a);
    ASSERT_EQ(pfaffian_reduce(s), pfaffian_expand(s));
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}
