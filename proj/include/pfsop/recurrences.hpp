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

// Spectral and time-evolution recurrences of the SOP/PSOP families, each
// returned as a residual polynomial that must vanish identically. t_1
// derivatives of polynomials come from jet-valued coefficients.

#include <string>
#include <vector>

#include "pfsop/hirota.hpp"
#include "pfsop/lax.hpp"
#include "pfsop/orthogonality.hpp"

namespace pfsop {

namespace detail {

// Jet data shared by the recurrences: polynomials and taus carry a first
// t_1 derivative; coefficient sequences come from LaxCoeffs.
template <typename F>
struct RecurrenceData {
  explicit RecurrenceData(const MomentSystem<F>& sys)
      : sys(&sys), coeffs(sys, 1), poly_ctx(sys, JetShape::box(1, 0)), s2_ctx(sys, JetShape::box(2, 1)) {}

  Poly<Jet<F>> Q(int n, int m) const { return psop(poly_ctx, n, m); }
  Poly<Jet<F>> P(int n, int m) const { return sop(poly_ctx, n, m); }
  Poly<F> base(const Poly<Jet<F>>& p) const { return base_of(p); }
  Poly<F> d1(const Poly<Jet<F>>& p) const { return d1_of(p); }
  // s_2(sign d~) tau / tau.
  F s2_log(int n, int m, int sign) const {
    Jet<F> t = s2_ctx.tau(n, m);
    return schur_d(t, 2, sign) * checked_inverse(t.base(), "tau_" + std::to_string(n));
  }

  const MomentSystem<F>* sys;
  LaxCoeffs<F> coeffs;
  PfaffianContext<F, Jet<F>> poly_ctx;
  PfaffianContext<F, Jet<F>> s2_ctx;
};

inline void require_tag(Constraint have, Constraint want, const char* what) {
  if (have != want) throw ConstraintMismatch(std::string(what) + " needs the " + constraint_name(want) + " constraint");
}

}  // namespace detail

// (z + d_1)(tau_{2n} P_{2n}) - tau_{2n} P_{2n+1}.
template <typename F>
Poly<F> derivative_identity_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::RecurrenceData<F> d(sys);
  Jet<F> t = d.poly_ctx.tau(2 * n, m);
  auto tp = d.P(2 * n, m).scaled(t);
  return d.base(tp).times_z() + d.d1(tp) - d.base(d.P(2 * n + 1, m)).scaled(t.base());
}

// s_l(-d~) tau == tau * [z^{deg-l}] poly for l <= min(deg, l_max), taking
// tau and poly from the even SOP, even PSOP and odd PSOP of order n.
enum class SchurFamily { sop_even, psop_even, psop_odd };

template <typename F>
std::vector<Defect<F>> schur_coefficient_defects(const MomentSystem<F>& sys, int n, int m, SchurFamily fam,
                                                 int l_max = 6, int k = 1) {
  PfaffianContext<F> ctx(sys);
  PfaffianContext<F, Jet<F>> jctx(sys, JetShape::weighted(l_max));
  Poly<F> poly(F(0));
  Jet<F> t = jctx.zero();
  int deg = 0;
  switch (fam) {
    case SchurFamily::sop_even:
      deg = 2 * n, poly = sop(ctx, deg, m), t = jctx.tau(deg, m);
      break;
    case SchurFamily::psop_even:
      deg = 2 * n, poly = psop(ctx, deg, m), t = jctx.tau(deg, m);
      break;
    case SchurFamily::psop_odd:
      deg = 2 * n + 1, poly = psop(ctx, deg, m, k), t = jctx.tau(deg, m, k);
      break;
  }
  std::vector<Defect<F>> out;
  for (int l = 0; l <= std::min(deg, l_max); ++l) {
    F lhs = schur_d(t, l), rhs = t.base() * poly[static_cast<std::size_t>(deg - l)];
    if (lhs != rhs) out.push_back({"s_" + std::to_string(l) + " at order " + std::to_string(deg), lhs - rhs});
  }
  return out;
}

// (z + d_1) Q_n - Q_{n+1} - K_n Q_n + J_n Q_{n-1}; no constraint needed.
template <typename F>
Poly<F> mixed_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  auto q = d.Q(n, m);
  return d.base(q).times_z() + d.d1(q) - d.base(d.Q(n + 1, m)) - d.base(q).scaled(c.K(n, m).base()) +
         d.base(d.Q(n - 1, m)).scaled(c.J(n, m).base());
}

// d_1(tau_n Q_n) - z^{-m} Pf(d_0, d_1, m..m+n, z) for even n,
// d_1(tau_n Q_n) - z^{-m} Pf(d_1, m..m+n, z) for odd n.
template <typename F>
Poly<F> psop_derivative_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank2, "the PSOP derivative formula");
  detail::RecurrenceData<F> d(sys);
  PfaffianContext<F> ctx(sys);
  Jet<F> t = d.poly_ctx.tau(n, m);
  auto tq = d.Q(n, m).scaled(t);
  Labels ls = n % 2 == 0 ? Label::d0() + (Label::d1() + range(m, m + n)) : Label::d1() + range(m, m + n);
  return d.d1(tq) - ctx.pf_z(ls + Label::z()).shifted(-m);
}

// d_1 Q_n + I_n d_1 Q_{n-1} - I_n (K_n + K_{n-1}) Q_{n-1}.
template <typename F>
Poly<F> evo_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank2, "the rank-two evolution");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  // I_0 = 0 kills the Q_{-1} terms, and K_{-1} is undefined.
  const F i = c.I(n, m).base(), k = n > 0 ? F(c.K(n, m).base() + c.K(n - 1, m).base()) : F(0);
  auto prev = d.Q(n - 1, m);
  return d.d1(d.Q(n, m)) + d.d1(prev).scaled(i) - d.base(prev).scaled(F(i * k));
}

// d_1 Q_n + d_1 log(tau_n/tau'_n) Q_n
//   - z (dq_sign tau_{n+1} tau'_{n-1} d_1 Q'_{n-1} + D_1 tau_{n+1}.tau'_{n-1} Q'_{n-1}) / (tau_n tau'_n),
// primes marking the m+1 family. It vanishes for dq_sign = -1 only.
template <typename F>
Poly<F> adjacent_evolution_residual(const MomentSystem<F>& sys, int n, int m, int dq_sign = -1) {
  detail::require_tag(sys.constraint(), Constraint::rank2, "the adjacent-family evolution");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  const F den = detail::checked_inverse(F(c.tau(n, m).base() * c.tau(n, m + 1).base()), "tau_n tau'_n");
  const F a = F(dq_sign) * c.tau(n + 1, m).base() * c.tau(n - 1, m + 1).base() * den;
  const F b = c.hirota1(n + 1, m, n - 1, m + 1).base() * den;
  auto q = d.Q(n, m), q1 = d.Q(n - 1, m + 1);
  return d.d1(q) + d.base(q).scaled(F(c.dlog(n, m).base() - c.dlog(n, m + 1).base())) -
         (d.d1(q1).scaled(a) + d.base(q1).scaled(b)).times_z();
}

// Q_n + A_n d_1 Q_n - z (Q'_{n-1} + Bt_n d_1 Q'_{n-1}).
template <typename F>
Poly<F> adjacent_spectral_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank2, "the adjacent-family spectral form");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  auto q = d.Q(n, m), q1 = d.Q(n - 1, m + 1);
  return d.base(q) + d.d1(q).scaled(c.A(n, m).base()) - (d.base(q1) + d.d1(q1).scaled(c.Bt(n, m).base())).times_z();
}

// Rank-one skew suite. All four below need tau_{2n} tau_{2n+2} = tau_{2n+1}^2.

// z Q_{2n} - Q_{2n+1} - K_{2n} Q_{2n} - J_{2n} Q_{2n-1}.
template <typename F>
Poly<F> three_term_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank1skew, "the three-term recurrence");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  auto q = d.base(d.Q(2 * n, m));
  return q.times_z() - d.base(d.Q(2 * n + 1, m)) - q.scaled(c.K(2 * n, m).base()) -
         d.base(d.Q(2 * n - 1, m)).scaled(c.J(2 * n, m).base());
}

// d_1 Q_{2n} + 2 J_{2n} Q_{2n-1}.
template <typename F>
Poly<F> even_evolution_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank1skew, "the even evolution");
  detail::RecurrenceData<F> d(sys);
  return d.d1(d.Q(2 * n, m)) + d.base(d.Q(2 * n - 1, m)).scaled(F(F(2) * d.coeffs.J(2 * n, m).base()));
}

// alpha_n = J_{2n+1} - s_2(sign d~) tau_{2n+1}/tau_{2n+1} + s_2(sign d~) tau_{2n}/tau_{2n}.
template <typename F>
F odd_alpha(const MomentSystem<F>& sys, int n, int m, int sign = +1) {
  detail::RecurrenceData<F> d(sys);
  return d.coeffs.J(2 * n + 1, m).base() - d.s2_log(2 * n + 1, m, sign) + d.s2_log(2 * n, m, sign);
}

// z (Q_{2n+1} - J_{2n} Q_{2n-1}) - Q_{2n+2} - K_{2n} Q_{2n+1}
//   - (alpha_n + K_{2n} d_1 log tau_{2n+1}) Q_{2n} + K_{2n} J_{2n} Q_{2n-1} + J_{2n-1} J_{2n} Q_{2n-2}.
template <typename F>
Poly<F> odd_spectral_residual(const MomentSystem<F>& sys, int n, int m, int alpha_sign = +1) {
  detail::require_tag(sys.constraint(), Constraint::rank1skew, "the odd spectral problem");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  const F k = c.K(2 * n, m).base(), j = c.J(2 * n, m).base();
  const F jm = n > 0 ? c.J(2 * n - 1, m).base() : F(0);  // multiplies Q_{-2} = 0
  const F g = odd_alpha(sys, n, m, alpha_sign) + k * c.dlog(2 * n + 1, m).base();
  auto q = [&](int i) { return d.base(d.Q(i, m)); };
  return (q(2 * n + 1) - q(2 * n - 1).scaled(j)).times_z() - q(2 * n + 2) - q(2 * n + 1).scaled(k) -
         q(2 * n).scaled(g) + q(2 * n - 1).scaled(F(k * j)) + q(2 * n - 2).scaled(F(jm * j));
}

// d_1 Q_{2n+1} - J_{2n} d_1 Q_{2n-1}
//   + (J_{2n+1} + J_{2n} - alpha_n - K_{2n} d_1 log tau_{2n+1}) Q_{2n}
//   - J_{2n} (K_{2n} - K_{2n-1}) Q_{2n-1} - 2 J_{2n-1} J_{2n} Q_{2n-2}.
template <typename F>
Poly<F> odd_evolution_residual(const MomentSystem<F>& sys, int n, int m) {
  detail::require_tag(sys.constraint(), Constraint::rank1skew, "the odd evolution");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  const F k = c.K(2 * n, m).base(), j = c.J(2 * n, m).base(), jp = c.J(2 * n + 1, m).base();
  // J_{-1}, K_{-1} only reach Q_{-1}, Q_{-2}, which vanish.
  const F km = n > 0 ? c.K(2 * n - 1, m).base() : F(0), jm = n > 0 ? c.J(2 * n - 1, m).base() : F(0);
  const F g = jp + j - odd_alpha(sys, n, m) - k * c.dlog(2 * n + 1, m).base();
  auto q = [&](int i) { return d.base(d.Q(i, m)); };
  auto dq = [&](int i) { return d.d1(d.Q(i, m)); };
  return dq(2 * n + 1) - dq(2 * n - 1).scaled(j) + q(2 * n).scaled(g) - q(2 * n - 1).scaled(F(j * (k - km))) -
         q(2 * n - 2).scaled(F(F(2) * jm * j));
}

// K_{2n} - K_{2n+1}, zero under the rank-one skew constraint.
template <typename F>
F k_parity_defect(const MomentSystem<F>& sys, int n, int m) {
  LaxCoeffs<F> c(sys, 1);
  return c.K(2 * n, m).base() - c.K(2 * n + 1, m).base();
}

// Laurent (Toeplitz) suite, m = 0 throughout.

template <typename F>
struct TodaVars {
  std::vector<F> B, C;
};

// B_n = tau_{2n-2} tau_{2n+2}/tau_{2n}^2, C_n = A_{n+1} - A_n, A_n = d_1 log tau_{2n}.
template <typename F>
TodaVars<F> toda_vars(const MomentSystem<F>& sys, int n_max) {
  LaxCoeffs<F> c(sys, 1);
  TodaVars<F> v;
  for (int n = 0; n <= n_max; ++n) {
    v.B.push_back(c.frac(c.tau(2 * n - 2, 0) * c.tau(2 * n + 2, 0), c.tau(2 * n, 0) * c.tau(2 * n, 0)).base());
    v.C.push_back((c.dlog(2 * n + 2, 0) - c.dlog(2 * n, 0)).base());
  }
  return v;
}

// d_1 B_n - B_n (C_n - C_{n-1}) and d_1 C_n - (B_{n+1} - B_n), n >= 1.
template <typename F>
std::pair<F, F> toda_flow_residual(const MomentSystem<F>& sys, int n) {
  detail::require_tag(sys.constraint(), Constraint::laurent, "the Toda flow");
  LaxCoeffs<F> c(sys, 1);
  auto B = [&](int i) { return c.frac(c.tau(2 * i - 2, 0) * c.tau(2 * i + 2, 0), c.tau(2 * i, 0) * c.tau(2 * i, 0)); };
  auto C = [&](int i) { return c.dlog(2 * i + 2, 0) - c.dlog(2 * i, 0); };
  const Jet<F> b = B(n), cn = C(n);
  return {b.d1() - b.base() * (cn.base() - C(n - 1).base()), cn.d1() - (B(n + 1).base() - b.base())};
}

// (z + d_1)(tau_{2n} P_{2n+1})/tau_{2n} - P_{2n+2} - (A_n + A_{n+1}) P_{2n+1} + D_n P_{2n} - B_n P_{2n-2},
// D_n = s_2(-d~) tau_{2n+2}/tau_{2n+2} + s_2(d~) tau_{2n}/tau_{2n}.
template <typename F>
Poly<F> second_derivative_residual(const MomentSystem<F>& sys, int n) {
  detail::require_tag(sys.constraint(), Constraint::laurent, "the second derivative identity");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  Jet<F> t = d.poly_ctx.tau(2 * n, 0);
  auto tp = d.P(2 * n + 1, 0).scaled(t);
  const F inv = detail::checked_inverse(t.base(), "tau_2n");
  const F a0 = c.dlog(2 * n, 0).base(), a1 = c.dlog(2 * n + 2, 0).base();
  const F dn = d.s2_log(2 * n + 2, 0, -1) + d.s2_log(2 * n, 0, +1);
  const F bn = c.frac(c.tau(2 * n - 2, 0) * c.tau(2 * n + 2, 0), c.tau(2 * n, 0) * c.tau(2 * n, 0)).base();
  auto p = [&](int i) { return d.base(d.P(i, 0)); };
  return (d.base(tp).times_z() + d.d1(tp)).scaled(inv) - p(2 * n + 2) - p(2 * n + 1).scaled(F(a0 + a1)) +
         p(2 * n).scaled(dn) - p(2 * n - 2).scaled(bn);
}

// Time evolutions of the Laurent SOPs:
//   d_1 P_{2n} - B_n d_1 P_{2n-2} + B_n P_{2n-1} - A_{n-1} B_n P_{2n-2},
//   d_1 P_{2n+1} - A_{n+1} d_1 P_{2n} - (A_n A_{n+1} - D_n + shift) P_{2n} - B_n P_{2n-2}.
template <typename F>
std::pair<Poly<F>, Poly<F>> laurent_evolution_residuals(const MomentSystem<F>& sys, int n, F shift = F(1)) {
  detail::require_tag(sys.constraint(), Constraint::laurent, "the Laurent SOP evolution");
  detail::RecurrenceData<F> d(sys);
  auto& c = d.coeffs;
  auto A = [&](int i) { return i < 0 ? F(0) : c.dlog(2 * i, 0).base(); };  // A_{-1} meets B_0 = 0
  const F bn = c.frac(c.tau(2 * n - 2, 0) * c.tau(2 * n + 2, 0), c.tau(2 * n, 0) * c.tau(2 * n, 0)).base();
  const F dn = d.s2_log(2 * n + 2, 0, -1) + d.s2_log(2 * n, 0, +1);
  auto p = [&](int i) { return d.base(d.P(i, 0)); };
  auto dp = [&](int i) { return d.d1(d.P(i, 0)); };
  Poly<F> first = dp(2 * n) - dp(2 * n - 2).scaled(bn) + p(2 * n - 1).scaled(bn) - p(2 * n - 2).scaled(F(A(n - 1) * bn));
  Poly<F> second = dp(2 * n + 1) - dp(2 * n).scaled(A(n + 1)) - p(2 * n).scaled(F(A(n) * A(n + 1) - dn + shift)) -
                   p(2 * n - 2).scaled(bn);
  return {first, second};
}

}  // namespace pfsop
