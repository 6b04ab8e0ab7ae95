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

// Skew-orthogonality relations of SOPs and PSOPs, and the determinant
// condition that pins down the odd-order families.

#include <string>
#include <vector>

#include "pfsop/families.hpp"
#include "pfsop/linalg.hpp"

namespace pfsop {

// A relation lhs == rhs that failed, with lhs - rhs attached.
template <typename F>
struct Defect {
  std::string where;
  F value;
};

// <z^m P_a, z^m P_b> against the expected Gram pattern for a, b <= 2 n_max + 1:
// zero within a parity class, tau_{2l+2}/tau_{2l} on the (2l, 2l+1) pairs.
template <typename F>
std::vector<Defect<F>> sop_relation_defects(const MomentSystem<F>& sys, int n_max, int m) {
  PfaffianContext<F> ctx(sys);
  const int top = 2 * n_max + 1;
  std::vector<Poly<F>> p;
  for (int a = 0; a <= top; ++a) p.push_back(sop(ctx, a, m));
  std::vector<Defect<F>> out;
  for (int a = 0; a <= top; ++a)
    for (int b = 0; b <= top; ++b) {
      F want(0);
      if (a % 2 == 0 && b == a + 1) want = ctx.tau(a + 2, m) * detail::checked_inverse(ctx.tau(a, m), "tau");
      if (b % 2 == 0 && a == b + 1) want = -(ctx.tau(b + 2, m) * detail::checked_inverse(ctx.tau(b, m), "tau"));
      F got = skew_inner(sys, p[a], p[b], m);
      if (got != want)
        out.push_back({"<P" + std::to_string(a) + ",P" + std::to_string(b) + ">^(" + std::to_string(m) + ")", got - want});
    }
  return out;
}

// <z^m Q_{2n}, z^{m+i}> = (tau_{2n+2}/tau_{2n}) [i = 2n+1] and
// <z^m Q_{2n+1,k}, z^{m+i}> = -beta^{(k)}_{m+i} tau_{2n+2}/tau_{2n+1,k}, 0 <= i <= 2n+1.
template <typename F>
std::vector<Defect<F>> psop_relation_defects(const MomentSystem<F>& sys, int n_max, int m, int k = 1) {
  PfaffianContext<F> ctx(sys);
  std::vector<Defect<F>> out;
  auto check = [&](const Poly<F>& q, int i, const F& want, const std::string& tag) {
    F got = skew_inner(sys, q, Poly<F>::monomial(F(0), static_cast<std::size_t>(i), F(1)), m);
    if (got != want) out.push_back({tag + " i=" + std::to_string(i) + " m=" + std::to_string(m), got - want});
  };
  for (int n = 0; n <= n_max; ++n) {
    auto even = psop(ctx, 2 * n, m);
    auto odd = psop(ctx, 2 * n + 1, m, k);
    const F lead = ctx.tau(2 * n + 2, m) * detail::checked_inverse(ctx.tau(2 * n, m), "tau");
    const F ratio = ctx.tau(2 * n + 2, m) * detail::checked_inverse(ctx.tau(2 * n + 1, m, k), "odd tau");
    for (int i = 0; i <= 2 * n + 1; ++i) {
      check(even, i, i == 2 * n + 1 ? lead : F(0), "Q" + std::to_string(2 * n));
      check(odd, i, -(sys.beta(k, m + i) * ratio), "Q" + std::to_string(2 * n + 1) + "," + std::to_string(k));
    }
  }
  return out;
}

enum class OddChoice { sop, psop };

// det [ mu_{m+j, m+i} | mu_{m+2n+1, m+i} - alpha_i ], rows i = 0..2n+1,
// with alpha from the SOP or the PSOP choice. Vanishes for both.
template <typename F>
F odd_condition_determinant(const MomentSystem<F>& sys, int n, int m, OddChoice choice, int k = 1) {
  PfaffianContext<F> ctx(sys);
  const int size = 2 * n + 2;
  DenseMatrix<F> a(size, std::vector<F>(size, F(0)));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j + 1 < size; ++j) a[i][j] = sys.mu(m + j, m + i);
    F alpha(0);
    if (choice == OddChoice::sop) {
      if (i == 2 * n) alpha = -(ctx.tau(2 * n + 2, m) * detail::checked_inverse(ctx.tau(2 * n, m), "tau"));
    } else {
      alpha = -(sys.beta(k, m + i) * ctx.tau(2 * n + 2, m) * detail::checked_inverse(ctx.tau(2 * n + 1, m, k), "odd tau"));
    }
    a[i][size - 1] = sys.mu(m + 2 * n + 1, m + i) - alpha;
  }
  return determinant(a);
}

}  // namespace pfsop
