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

#include "pfsop/christoffel.hpp"
#include "pfsop/generators.hpp"

using namespace pfsop;

namespace {

using P = Poly<Rational>;

MomentSystem<Rational> admissible(Constraint kind, std::uint64_t seed, int components = 1) {
  GenParams p;
  p.kind = kind;
  p.seed = seed;
  p.components = components;
  p.max_index = 18;
  return sample_admissible(p, 9, 3).system;
}

bool zero(const PolyPair<Rational>& r) { return r.first.is_zero() && r.second.is_zero(); }

}  // namespace

TEST(Christoffel, SopBoundaryAtNZero) {
  auto sys = admissible(Constraint::none, 1);
  PfaffianContext<Rational> ctx(sys);
  PfaffianContext<Rational, Jet<Rational>> jctx(sys, JetShape::box(1, 0));
  for (int m = 0; m <= 2; ++m) {
    EXPECT_EQ(sop_coeffs(ctx, jctx, 0, m).A, Rational(0));  // P_1(0) = 0
    EXPECT_TRUE(zero(sop_transform_residual(sys, 0, m)));
  }
}

TEST(Christoffel, SopTransformVanishes) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = admissible(Constraint::none, seed);
    for (int m = 0; m <= 2; ++m)
      for (int n = 1; n <= 3; ++n) EXPECT_TRUE(zero(sop_transform_residual(sys, n, m))) << seed << " " << n << " " << m;
  }
}

TEST(Christoffel, SopCorruptedCoefficientsFail) {
  auto sys = admissible(Constraint::none, 2);
  CoeffShift<Rational> bump;
  bump.b = 1;
  auto r = sop_transform_residual(sys, 1, 0, bump);
  // The B term multiplies z P'_0 = z.
  EXPECT_EQ(r.first, P::monomial(Rational(0), 1, Rational(1)));
  EXPECT_TRUE(r.second.is_zero());
  for (int which = 0; which < 4; ++which) {
    CoeffShift<Rational> s;
    (which == 0 ? s.a : which == 1 ? s.b : which == 2 ? s.c : s.d) = Rational(1, 7);
    EXPECT_FALSE(zero(sop_transform_residual(sys, 2, 1, s))) << which;
  }
}

TEST(Christoffel, DRatioFormAgreesWithDerivativeForm) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = admissible(Constraint::none, seed);
    PfaffianContext<Rational> ctx(sys);
    PfaffianContext<Rational, Jet<Rational>> jctx(sys, JetShape::box(1, 0));
    for (int m = 1; m <= 2; ++m)
      for (int n = 0; n <= 3; ++n) EXPECT_EQ(sop_coeffs(ctx, jctx, n, m).D, sop_coeff_d_ratio(ctx, n, m));
  }
  auto sys = admissible(Constraint::none, 1);
  EXPECT_THROW(sop_coeff_d_ratio(PfaffianContext<Rational>(sys), 0, 0), std::out_of_range);
}

TEST(Christoffel, PsopBoundaryAtNZero) {
  // Q_1 + xi_0 Q_0 = z Q'_0; eta_0 carries tau_{-1} = 0.
  auto sys = admissible(Constraint::none, 3);
  PfaffianContext<Rational> ctx(sys);
  for (int m = 0; m <= 2; ++m) {
    EXPECT_EQ(psop_eta(ctx, 0, m), Rational(0));
    EXPECT_TRUE(psop_transform_residual(sys, 0, m).is_zero());
  }
}

TEST(Christoffel, PsopTransformVanishes) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = admissible(Constraint::none, seed);
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 7; ++n) EXPECT_TRUE(psop_transform_residual(sys, n, m).is_zero()) << seed << " " << n;
  }
}

TEST(Christoffel, PsopBumpedXiFails) {
  auto sys = admissible(Constraint::none, 4);
  for (int n = 0; n <= 5; ++n) {
    auto r = psop_transform_residual(sys, n, 1, Rational(1));
    // The bump shows up as exactly Q_n.
    PfaffianContext<Rational> ctx(sys);
    EXPECT_EQ(r, psop(ctx, n, 1));
  }
}

TEST(Christoffel, MultiComponentTransformVanishes) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto sys = admissible(Constraint::none, seed, 3);
    for (int k = 1; k <= 3; ++k)
      for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 3; ++n)
          EXPECT_TRUE(zero(psop_multi_transform_residual(sys, n, m, k))) << seed << " k" << k << " n" << n << " m" << m;
  }
}

TEST(Christoffel, MultiComponentSwappedComponentFails) {
  auto sys = admissible(Constraint::none, 5, 3);
  int failures = 0;
  for (int n = 1; n <= 3; ++n) failures += !zero(psop_multi_transform_residual(sys, n, 0, 1, 2));
  EXPECT_EQ(failures, 3);
  // n = 0 never sees F (it multiplies Q'_{-1} = 0), so the swap is invisible there.
  EXPECT_TRUE(zero(psop_multi_transform_residual(sys, 0, 0, 1, 2)));
}

TEST(Christoffel, OneComponentCaseOfMultiMatches) {
  auto sys = admissible(Constraint::none, 6);
  PfaffianContext<Rational> ctx(sys);
  for (int n = 0; n <= 3; ++n) {
    auto c = psop_multi_coeffs(ctx, n, 0, 1);
    EXPECT_EQ(c.E, psop_xi(ctx, 2 * n, 0));
    EXPECT_EQ(c.Fc, psop_eta(ctx, 2 * n, 0));
    EXPECT_EQ(c.G, psop_xi(ctx, 2 * n + 1, 0));
    EXPECT_EQ(c.H, psop_eta(ctx, 2 * n + 1, 0));
  }
}

TEST(Christoffel, LaurentTodaReduction) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = admissible(Constraint::laurent, seed);
    for (int n = 0; n <= 3; ++n) EXPECT_TRUE(zero(laurent_toda_residual(sys, n))) << seed << " " << n;
  }
  EXPECT_THROW(laurent_toda_residual(admissible(Constraint::none, 1), 1), ConstraintMismatch);
}

TEST(Christoffel, LaurentTodaBoundaryForm) {
  // n = 0: P_2 - P_0 = z (P_1 - A_1 P_0).
  auto sys = admissible(Constraint::laurent, 7);
  PfaffianContext<Rational> ctx(sys);
  PfaffianContext<Rational, Jet<Rational>> jctx(sys, JetShape::box(1, 0));
  const Rational a1 = jctx.tau(2, 0).d1() / jctx.tau(2, 0).base();
  const P one = P::monomial(Rational(0), 0, Rational(1));
  EXPECT_EQ(sop(ctx, 2, 0) - one, (sop(ctx, 1, 0) - one * a1).times_z());
}

TEST(Christoffel, LotkaVolterraCoefficients) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sys = admissible(Constraint::laurent, seed);
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(laurent_lv_coeff_check(sys, n), Rational(0)) << seed << " " << n;
  }
}

TEST(Christoffel, LotkaVolterraNeedsToeplitzData) {
  auto sys = admissible(Constraint::laurent, 8);
  sys.set_mu(0, 2, sys.mu(0, 2) + 1);  // no longer Toeplitz, tag kept
  int nonzero = 0;
  for (int n = 1; n <= 4; ++n) nonzero += laurent_lv_coeff_check(sys, n) != 0;
  EXPECT_GT(nonzero, 0);
}
