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

// Truncated Lax operators built from PSOP coefficients, and exact
// compatibility residuals on the interior block.

#include <cstddef>
#include <string>
#include <vector>

#include "pfsop/families.hpp"
#include "pfsop/operators.hpp"

namespace pfsop {

// One-component coefficient sequences as t_1-jets of a fixed order. Taus
// are lifted one order higher so log-derivatives keep that order.
template <typename F>
class LaxCoeffs {
 public:
  LaxCoeffs(const MomentSystem<F>& sys, int order = 1)
      : sys_(&sys), shape_(JetShape::box(order, 0)), ctx_(sys, JetShape::box(order + 1, 0)) {}

  const ShapePtr& shape() const { return shape_; }
  const MomentSystem<F>& system() const { return *sys_; }
  Jet<F> zero() const { return Jet<F>(shape_); }
  Jet<F> one() const { return Jet<F>(shape_, F(1)); }

  Jet<F> tau(int n, int m) const { return full(n, m).restrict_to(shape_); }
  Jet<F> dlog(int n, int m) const {
    Jet<F> t = full(n, m);
    if (!t.is_unit()) throw VanishingNormalizer("log-derivative of a vanishing tau");
    return t.derivative(1) * t.restrict_to(shape_).inverse();
  }
  // D_1 tau_a^{(ma)} . tau_b^{(mb)}
  Jet<F> hirota1(int a, int ma, int b, int mb) const {
    Jet<F> f = full(a, ma), g = full(b, mb);
    return f.derivative(1) * g.restrict_to(shape_) - f.restrict_to(shape_) * g.derivative(1);
  }

  // Christoffel coefficients.
  Jet<F> xi(int n, int m) const { return frac(tau(n, m) * tau(n + 1, m + 1), tau(n + 1, m) * tau(n, m + 1)); }
  Jet<F> eta(int n, int m) const { return frac(tau(n + 2, m) * tau(n - 1, m + 1), tau(n + 1, m) * tau(n, m + 1)); }
  // K_n = d_1 log(tau_{n+1}/tau_n), J_n = tau_{n+2} tau_{n-1} / (tau_n tau_{n+1}).
  Jet<F> K(int n, int m) const { return dlog(n + 1, m) - dlog(n, m); }
  Jet<F> J(int n, int m) const { return frac(tau(n + 2, m) * tau(n - 1, m), tau(n, m) * tau(n + 1, m)); }
  // I_n = tau_{n+1} tau_{n-1} / tau_n^2.
  Jet<F> I(int n, int m) const { return frac(tau(n + 1, m) * tau(n - 1, m), tau(n, m) * tau(n, m)); }
  // Rank-two rewriting: A_n = 1/d_1 log(tau_n/tau'_n), Bt_n = -tau_{n+1} tau'_{n-1} / D_1 tau_{n+1}.tau'_{n-1}.
  Jet<F> A(int n, int m) const { return frac(one(), dlog(n, m) - dlog(n, m + 1)); }
  Jet<F> Bt(int n, int m) const { return -frac(tau(n + 1, m) * tau(n - 1, m + 1), hirota1(n + 1, m, n - 1, m + 1)); }

  Jet<F> frac(const Jet<F>& num, const Jet<F>& den) const {
    if (!den.is_unit()) throw VanishingNormalizer("vanishing denominator in a Lax coefficient");
    return num * den.inverse();
  }

 private:
  Jet<F> full(int n, int m) const { return ctx_.tau(n, m); }

  const MomentSystem<F>* sys_;
  ShapePtr shape_;
  PfaffianContext<F, Jet<F>> ctx_;
};

template <typename F>
using JetMat = Mat<Jet<F>>;

template <typename F>
struct PsopLax {
  JetMat<F> L, M;
};

template <typename F>
struct Rank2Lax {
  JetMat<F> L1, L2, M, N;
};

namespace detail {

template <typename F, typename Fn>
JetMat<F> diag_of(const LaxCoeffs<F>& c, std::size_t n, Fn fn) {
  std::vector<Jet<F>> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(fn(static_cast<int>(i)));
  return JetMat<F>::diagonal(d, c.zero());
}

template <typename F>
void require_size(std::size_t n) {
  if (n < 4) throw std::invalid_argument("Lax truncation needs N >= 4");
}

}  // namespace detail

// L = (I + Lambda eta)^{-1} (Lambda^T + xi), eta = diag(eta_1, ...), xi = diag(xi_0, ...);
// M = Lambda^T + K - Lambda diag(J_1, J_2, ...), so row n reads Q_{n+1} + K_n Q_n - J_n Q_{n-1}.
template <typename F>
PsopLax<F> build_psop_lax(const LaxCoeffs<F>& c, int m, std::size_t n) {
  detail::require_size<F>(n);
  const auto z = c.zero(), one = c.one();
  auto I = JetMat<F>::identity(n, z, one);
  auto Lam = JetMat<F>::lower_shift(n, z, one);
  auto LamT = Lam.transposed();
  auto eta = detail::diag_of(c, n, [&](int i) { return c.eta(i + 1, m); });
  auto xi = detail::diag_of(c, n, [&](int i) { return c.xi(i, m); });
  auto K = detail::diag_of(c, n, [&](int i) { return c.K(i, m); });
  auto J = detail::diag_of(c, n, [&](int i) { return c.J(i + 1, m); });
  PsopLax<F> out{(I + Lam * eta).triangular_inverse() * (LamT + xi), LamT + K - Lam * J};
  return out;
}

// Rank-two operators:
//   L1 = (a1 + Lambda a2)^{-1} (a3 + a4 Lambda^T),  L2 = (a1 + Lambda a2)^{-1} a5,
//   M  = (b1 + Lambda^T)^{-1} b2,                    N  = (b3 + Lambda^T)^{-1} (I + Lambda b4),
// with a1 = diag(Bt_1, ...), a2 = diag(eta_1 Bt_1, ...), a3 = diag(eta_n A_n),
// a4 = diag(A_1, ...), a5 = diag(eta_n - xi_n), b1 = diag(I_1, ...),
// b2 = diag(I_{n+1}(K_n + K_{n+1})), b3 = diag(xi_0, ...), b4 = diag(eta_1, ...).
template <typename F>
Rank2Lax<F> build_rank2_lax(const LaxCoeffs<F>& c, int m, std::size_t n) {
  detail::require_size<F>(n);
  const auto z = c.zero(), one = c.one();
  auto I = JetMat<F>::identity(n, z, one);
  auto Lam = JetMat<F>::lower_shift(n, z, one);
  auto LamT = Lam.transposed();
  auto a1 = detail::diag_of(c, n, [&](int i) { return c.Bt(i + 1, m); });
  auto a2 = detail::diag_of(c, n, [&](int i) { return c.eta(i + 1, m) * c.Bt(i + 1, m); });
  auto a3 = detail::diag_of(c, n, [&](int i) { return i == 0 ? c.zero() : c.eta(i, m) * c.A(i, m); });
  auto a4 = detail::diag_of(c, n, [&](int i) { return c.A(i + 1, m); });
  auto a5 = detail::diag_of(c, n, [&](int i) { return c.eta(i, m) - c.xi(i, m); });
  auto b1 = detail::diag_of(c, n, [&](int i) { return c.I(i + 1, m); });
  auto b2 = detail::diag_of(c, n, [&](int i) { return c.I(i + 1, m) * (c.K(i, m) + c.K(i + 1, m)); });
  auto b3 = detail::diag_of(c, n, [&](int i) { return c.xi(i, m); });
  auto b4 = detail::diag_of(c, n, [&](int i) { return c.eta(i + 1, m); });
  auto left = (a1 + Lam * a2).triangular_inverse();
  Rank2Lax<F> out{left * (a3 + a4 * LamT), left * a5, (b1 + LamT).triangular_inverse() * b2,
                  (b3 + LamT).triangular_inverse() * (I + Lam * b4)};
  return out;
}

// Residual matrix plus the interior-block verdict (rows/cols 1..N-3).
template <typename F>
struct BlockResidual {
  Mat<F> full;
  bool interior_zero() const {
    for (std::size_t i = 1; i <= full.size() - 3; ++i)
      for (std::size_t j = 1; j <= full.size() - 3; ++j)
        if (!is_zero(full(i, j))) return false;
    return true;
  }
  double interior_max() const {
    double mx = 0;
    for (std::size_t i = 1; i <= full.size() - 3; ++i)
      for (std::size_t j = 1; j <= full.size() - 3; ++j) mx = std::max(mx, magnitude(full(i, j)));
    return mx;
  }
  std::size_t boundary_nonzero() const {
    std::size_t c = 0;
    const std::size_t n = full.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool interior = i >= 1 && j >= 1 && i <= n - 3 && j <= n - 3;
        if (!interior && !is_zero(full(i, j))) ++c;
      }
    return c;
  }
};

template <typename F>
Mat<F> base_values(const JetMat<F>& a) {
  return a.map([](const Jet<F>& j) { return j.base(); });
}
template <typename F>
Mat<F> d1_values(const JetMat<F>& a) {
  return a.map([](const Jet<F>& j) { return j.d1(); });
}

// d_1 L^{(m)} - (M^{(m+1)} L^{(m)} - L^{(m)} M^{(m)}).
template <typename F>
BlockResidual<F> lax_compat_residual(const MomentSystem<F>& sys, int m, std::size_t n) {
  LaxCoeffs<F> c(sys, 1);
  auto a = build_psop_lax(c, m, n);
  auto b = build_psop_lax(c, m + 1, n);
  Mat<F> L = base_values(a.L), M = base_values(a.M), M1 = base_values(b.M);
  return {d1_values(a.L) - (M1 * L - L * M)};
}

// First rank-two form: M^{(m+1)} - (L1 M + L2) N.
template <typename F>
BlockResidual<F> rank2_first_form_residual(const MomentSystem<F>& sys, int m, std::size_t n) {
  if (sys.constraint() != Constraint::rank2) throw std::invalid_argument("rank-two forms need a rank2 system");
  LaxCoeffs<F> c(sys, 1);
  auto a = build_rank2_lax(c, m, n);
  auto b = build_rank2_lax(c, m + 1, n);
  Mat<F> L1 = base_values(a.L1), L2 = base_values(a.L2), M = base_values(a.M), N = base_values(a.N);
  return {base_values(b.M) - (L1 * M + L2) * N};
}

// Second rank-two form, regrouped with the first so every product is a
// finite sum: d_1 N - (M N - N M^{(m+1)}).
template <typename F>
BlockResidual<F> rank2_second_form_residual(const MomentSystem<F>& sys, int m, std::size_t n) {
  if (sys.constraint() != Constraint::rank2) throw std::invalid_argument("rank-two forms need a rank2 system");
  LaxCoeffs<F> c(sys, 1);
  auto a = build_rank2_lax(c, m, n);
  auto b = build_rank2_lax(c, m + 1, n);
  Mat<F> M = base_values(a.M), N = base_values(a.N), M1 = base_values(b.M);
  return {d1_values(a.N) - (M * N - N * M1)};
}

// Wave vector (Q_0, ..., Q_{n-1}) at shift m with t_1-jet coefficients.
template <typename F>
std::vector<Poly<Jet<F>>> wave_vector(const PfaffianContext<F, Jet<F>>& ctx, int m, std::size_t n) {
  std::vector<Poly<Jet<F>>> phi;
  for (std::size_t i = 0; i < n; ++i) phi.push_back(psop(ctx, static_cast<int>(i), m));
  return phi;
}

// Row defects of the operator actions on the wave vector, rows 1..N-3:
//   L Phi - z Phi',  M Phi - (z + d_1) Phi.
template <typename F>
std::vector<Poly<F>> lax_row_defects(const MomentSystem<F>& sys, int m, std::size_t n) {
  LaxCoeffs<F> c(sys, 1);
  auto ops = build_psop_lax(c, m, n);
  PfaffianContext<F, Jet<F>> ctx(sys, JetShape::box(1, 0));
  auto phi = wave_vector(ctx, m, n), phi1 = wave_vector(ctx, m + 1, n);
  std::vector<Poly<F>> out;
  Mat<F> L = base_values(ops.L), M = base_values(ops.M);
  std::vector<Poly<F>> b, b1;
  for (std::size_t i = 0; i < n; ++i) {
    b.push_back(base_of(phi[i]));
    b1.push_back(base_of(phi1[i]));
  }
  for (std::size_t i = 1; i + 3 <= n; ++i) {
    out.push_back(L.apply_row(i, b) - b1[i].times_z());
    out.push_back(M.apply_row(i, b) - (b[i].times_z() + d1_of(phi[i])));
  }
  return out;
}

// Rank-two row defects, rows 1..N-3:
//   L1 d_1 Phi + L2 Phi - z d_1 Phi',  (b1 + Lambda^T) d_1 Phi - b2 Phi,
//   (b3 + Lambda^T) Phi - z (I + Lambda b4) Phi'.
template <typename F>
std::vector<Poly<F>> rank2_row_defects(const MomentSystem<F>& sys, int m, std::size_t n) {
  if (sys.constraint() != Constraint::rank2) throw std::invalid_argument("rank-two forms need a rank2 system");
  LaxCoeffs<F> c(sys, 1);
  auto ops = build_rank2_lax(c, m, n);
  PfaffianContext<F, Jet<F>> ctx(sys, JetShape::box(1, 0));
  auto phi = wave_vector(ctx, m, n), phi1 = wave_vector(ctx, m + 1, n);
  std::vector<Poly<F>> q, dq, q1, dq1;
  for (std::size_t i = 0; i < n; ++i) {
    q.push_back(base_of(phi[i]));
    dq.push_back(d1_of(phi[i]));
    q1.push_back(base_of(phi1[i]));
    dq1.push_back(d1_of(phi1[i]));
  }
  Mat<F> L1 = base_values(ops.L1), L2 = base_values(ops.L2);
  std::vector<Poly<F>> out;
  for (std::size_t i = 1; i + 3 <= n; ++i) {
    const int k = static_cast<int>(i);
    out.push_back(L1.apply_row(i, dq) + L2.apply_row(i, q) - dq1[i].times_z());
    out.push_back(dq[i].scaled(c.I(k + 1, m).base()) + dq[i + 1] -
                  q[i].scaled(F(c.I(k + 1, m).base() * (c.K(k, m).base() + c.K(k + 1, m).base()))));
    out.push_back(q[i].scaled(c.xi(k, m).base()) + q[i + 1] -
                  (q1[i] + q1[i - 1].scaled(c.eta(k, m).base())).times_z());
  }
  return out;
}

}  // namespace pfsop
