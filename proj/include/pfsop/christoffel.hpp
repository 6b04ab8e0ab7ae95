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

#pragma once

// Christoffel transformations: coefficient formulas as tau ratios and the
// transformations themselves as exact polynomial residuals.

#include <stdexcept>
#include <string>
#include <utility>

#include "pfsop/families.hpp"
#include "pfsop/hirota.hpp"

namespace pfsop {

template <typename F>
using PolyPair = std::pair<Poly<F>, Poly<F>>;

// Optional additive perturbations of the coefficients, for negative
// controls. Zero by default.
template <typename F>
struct CoeffShift {
  F a{0}, b{0}, c{0}, d{0};
};

template <typename F>
struct SopCoeffs {
  F A, B, C, D;
};

namespace detail {

// tau ratio with an explicit name for the failure message.
template <typename F>
F ratio(const F& num, const F& den, const char* what) {
  if (is_zero(den)) throw VanishingNormalizer(std::string("vanishing denominator in ") + what);
  return num / den;
}

template <typename F>
F dlog(const Jet<F>& j) {
  if (is_zero(j.base())) throw VanishingNormalizer("log-derivative of a vanishing tau");
  return j.d1() / j.base();
}

}  // namespace detail

// A = P_{2n+1}(0)/P_{2n}(0), B, C as tau ratios, D = d_1 log tau_{2n+2}^{(m)}.
template <typename F>
SopCoeffs<F> sop_coeffs(const PfaffianContext<F>& ctx, const PfaffianContext<F, Jet<F>>& jctx, int n, int m) {
  SopCoeffs<F> c;
  c.A = detail::ratio(sop_at_zero(ctx, 2 * n + 1, m), sop_at_zero(ctx, 2 * n, m), "A");
  c.B = detail::ratio(F(ctx.tau(2 * n + 2, m) * ctx.tau(2 * n - 2, m + 1)), F(ctx.tau(2 * n, m) * ctx.tau(2 * n, m + 1)), "B");
  c.C = detail::ratio(F(ctx.tau(2 * n, m) * ctx.tau(2 * n + 2, m + 1)), F(ctx.tau(2 * n + 2, m) * ctx.tau(2 * n, m + 1)), "C");
  c.D = detail::dlog(jctx.tau(2 * n + 2, m));
  return c;
}

// D via the zero-value ratio P_{2n+3}^{(m-1)}(0)/P_{2n+2}^{(m-1)}(0); m >= 1.
template <typename F>
F sop_coeff_d_ratio(const PfaffianContext<F>& ctx, int n, int m) {
  if (m < 1) throw std::out_of_range("ratio form of D needs m >= 1");
  return detail::ratio(sop_at_zero(ctx, 2 * n + 3, m - 1), sop_at_zero(ctx, 2 * n + 2, m - 1), "D");
}

// P_{2n+1} - A P_{2n} - z (P'_{2n} - B P'_{2n-2}) and
// P_{2n+2} - C P_{2n} - z (P'_{2n+1} - D P'_{2n}), primes at shift m+1.
template <typename F>
PolyPair<F> sop_transform_residual(const MomentSystem<F>& sys, int n, int m, const CoeffShift<F>& bump = {}) {
  PfaffianContext<F> ctx(sys);
  PfaffianContext<F, Jet<F>> jctx(sys, JetShape::box(1, 0));
  SopCoeffs<F> c = sop_coeffs(ctx, jctx, n, m);
  c.A += bump.a;
  c.B += bump.b;
  c.C += bump.c;
  c.D += bump.d;
  Poly<F> r1 = sop(ctx, 2 * n + 1, m) - sop(ctx, 2 * n, m) * c.A -
               (sop(ctx, 2 * n, m + 1) - sop(ctx, 2 * n - 2, m + 1) * c.B).times_z();
  Poly<F> r2 = sop(ctx, 2 * n + 2, m) - sop(ctx, 2 * n, m) * c.C -
               (sop(ctx, 2 * n + 1, m + 1) - sop(ctx, 2 * n, m + 1) * c.D).times_z();
  return {r1, r2};
}

// One-component PSOP coefficients.
template <typename F>
F psop_xi(const PfaffianContext<F>& ctx, int n, int m, int k = 1) {
  return detail::ratio(F(ctx.tau(n, m, k) * ctx.tau(n + 1, m + 1, k)), F(ctx.tau(n + 1, m, k) * ctx.tau(n, m + 1, k)), "xi");
}
template <typename F>
F psop_eta(const PfaffianContext<F>& ctx, int n, int m, int k = 1) {
  return detail::ratio(F(ctx.tau(n + 2, m, k) * ctx.tau(n - 1, m + 1, k)), F(ctx.tau(n + 1, m, k) * ctx.tau(n, m + 1, k)),
                       "eta");
}

// Q_{n+1} + xi Q_n - z (Q'_n + eta Q'_{n-1}).
template <typename F>
Poly<F> psop_transform_residual(const MomentSystem<F>& sys, int n, int m, F xi_bump = F(0)) {
  PfaffianContext<F> ctx(sys);
  F xi = psop_xi(ctx, n, m) + xi_bump;
  F eta = psop_eta(ctx, n, m);
  return psop(ctx, n + 1, m) + psop(ctx, n, m) * xi -
         (psop(ctx, n, m + 1) + psop(ctx, n - 1, m + 1) * eta).times_z();
}

template <typename F>
struct MultiCoeffs {
  F E, Fc, G, H;
};

// E, F, G, H for component k. `swap_k`, when positive, takes the odd taus
// of F from that component instead (a negative control).
template <typename F>
MultiCoeffs<F> psop_multi_coeffs(const PfaffianContext<F>& ctx, int n, int m, int k, int swap_k = 0) {
  const int kf = swap_k > 0 ? swap_k : k;
  MultiCoeffs<F> c;
  c.E = detail::ratio(F(ctx.tau(2 * n, m) * ctx.tau(2 * n + 1, m + 1, k)), F(ctx.tau(2 * n + 1, m, k) * ctx.tau(2 * n, m + 1)), "E");
  c.Fc = detail::ratio(F(ctx.tau(2 * n + 2, m) * ctx.tau(2 * n - 1, m + 1, kf)),
                       F(ctx.tau(2 * n + 1, m, kf) * ctx.tau(2 * n, m + 1)), "F");
  c.G = detail::ratio(F(ctx.tau(2 * n + 1, m, k) * ctx.tau(2 * n + 2, m + 1)),
                      F(ctx.tau(2 * n + 2, m) * ctx.tau(2 * n + 1, m + 1, k)), "G");
  c.H = detail::ratio(F(ctx.tau(2 * n + 3, m, k) * ctx.tau(2 * n, m + 1)),
                      F(ctx.tau(2 * n + 2, m) * ctx.tau(2 * n + 1, m + 1, k)), "H");
  return c;
}

// Q_{2n+1,k} + E Q_{2n} - z (Q'_{2n} + F Q'_{2n-1,k}) and
// Q_{2n+2} + G Q_{2n+1,k} - z (Q'_{2n+1,k} + H Q'_{2n}).
template <typename F>
PolyPair<F> psop_multi_transform_residual(const MomentSystem<F>& sys, int n, int m, int k, int swap_k = 0) {
  PfaffianContext<F> ctx(sys);
  MultiCoeffs<F> c = psop_multi_coeffs(ctx, n, m, k, swap_k);
  Poly<F> r1 = psop(ctx, 2 * n + 1, m, k) + psop(ctx, 2 * n, m) * c.E -
               (psop(ctx, 2 * n, m + 1) + psop(ctx, 2 * n - 1, m + 1, k) * c.Fc).times_z();
  Poly<F> r2 = psop(ctx, 2 * n + 2, m) + psop(ctx, 2 * n + 1, m, k) * c.G -
               (psop(ctx, 2 * n + 1, m + 1, k) + psop(ctx, 2 * n, m + 1) * c.H).times_z();
  return {r1, r2};
}

// Laurent reduction: with A_n = d_1 log tau_{2n}, B_n = tau_{2n-2} tau_{2n+2} / tau_{2n}^2,
//   P_{2n+1} - A_n P_{2n} = z (P_{2n} - B_n P_{2n-2})
//   P_{2n+2} - P_{2n}     = z (P_{2n+1} - A_{n+1} P_{2n}).
template <typename F>
PolyPair<F> laurent_toda_residual(const MomentSystem<F>& sys, int n) {
  if (sys.constraint() != Constraint::laurent) throw ConstraintMismatch("Toda reduction needs a laurent system");
  PfaffianContext<F> ctx(sys);
  PfaffianContext<F, Jet<F>> jctx(sys, JetShape::box(1, 0));
  auto A = [&](int j) { return detail::dlog(jctx.tau(2 * j, 0)); };
  F B = detail::ratio(F(ctx.tau(2 * n - 2, 0) * ctx.tau(2 * n + 2, 0)), F(ctx.tau(2 * n, 0) * ctx.tau(2 * n, 0)), "B");
  Poly<F> r1 = sop(ctx, 2 * n + 1, 0) - sop(ctx, 2 * n, 0) * A(n) - (sop(ctx, 2 * n, 0) - sop(ctx, 2 * n - 2, 0) * B).times_z();
  Poly<F> r2 = sop(ctx, 2 * n + 2, 0) - sop(ctx, 2 * n, 0) - (sop(ctx, 2 * n + 1, 0) - sop(ctx, 2 * n, 0) * A(n + 1)).times_z();
  return {r1, r2};
}

// xi_n + eta_n - 1 with xi_n = d_1 log(tau_{n+1}/tau_n) and
// eta_n = tau_{n-1} tau_{n+2} / (tau_n tau_{n+1}).
template <typename F>
F laurent_lv_coeff_check(const MomentSystem<F>& sys, int n) {
  if (sys.constraint() != Constraint::laurent) throw ConstraintMismatch("Lotka-Volterra reduction needs a laurent system");
  PfaffianContext<F> ctx(sys);
  PfaffianContext<F, Jet<F>> jctx(sys, JetShape::box(1, 0));
  F xi = detail::dlog(jctx.tau(n + 1, 0)) - detail::dlog(jctx.tau(n, 0));
  F eta = detail::ratio(F(ctx.tau(n - 1, 0) * ctx.tau(n + 2, 0)), F(ctx.tau(n, 0) * ctx.tau(n + 1, 0)), "eta");
  return xi + eta - F(1);
}

}  // namespace pfsop
