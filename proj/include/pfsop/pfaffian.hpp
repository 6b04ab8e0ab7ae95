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

// Pfaffians of skew-symmetric matrices over a commutative ring.
//
// pfaffian_expand   memoized expansion along the first remaining row;
//                   works in any ring, exponential but fine to 2N = 16.
// pfaffian_reduce   elimination over units: Pf(A) = a01 * Pf(C - (u v^T -
//                   v u^T) / a01), with u, v the first two rows restricted
//                   to the remaining indices. Falls back to expansion when
//                   no unit pivot is left.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pfsop/ring.hpp"

namespace pfsop {

template <typename R>
class SkewMatrix {
 public:
  SkewMatrix(std::size_t n, R zero) : n_(n), zero_(std::move(zero)), up_(n * (n ? n - 1 : 0) / 2, zero_) {}

  std::size_t size() const { return n_; }
  const R& zero() const { return zero_; }

  R at(std::size_t i, std::size_t j) const {
    if (i == j) return zero_;
    if (i < j) return up_[slot(i, j)];
    return -up_[slot(j, i)];
  }
  const R& upper(std::size_t i, std::size_t j) const { return up_[slot(i, j)]; }
  void set(std::size_t i, std::size_t j, R v) {
    if (i == j) throw std::invalid_argument("diagonal of a skew matrix is zero");
    if (i < j)
      up_[slot(i, j)] = std::move(v);
    else
      up_[slot(j, i)] = -v;
  }

  // Principal submatrix on the given (increasing) indices.
  SkewMatrix select(const std::vector<std::size_t>& idx) const {
    SkewMatrix s(idx.size(), zero_);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) s.set(a, b, at(idx[a], idx[b]));
    return s;
  }

 private:
  std::size_t slot(std::size_t i, std::size_t j) const {
    if (j >= n_) throw std::out_of_range("skew matrix index");
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t n_;
  R zero_;
  std::vector<R> up_;
};

template <typename R>
R pfaffian_expand(const SkewMatrix<R>& a) {
  const std::size_t n = a.size();
  if (n % 2) throw std::invalid_argument("Pfaffian of odd dimension");
  if (n > 30) throw std::invalid_argument("expansion limited to 30 rows");
  R one = ring_traits<R>::one_like(a.zero());
  if (n == 0) return one;
  std::unordered_map<std::uint32_t, R> memo;
  // mask = set of remaining indices; Pf over them
  auto rec = [&](auto&& self, std::uint32_t mask) -> R {
    if (mask == 0) return one;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::size_t i = static_cast<std::size_t>(__builtin_ctz(mask));
    std::uint32_t rest = mask & ~(1u << i);
    R total = a.zero();
    int pos = 0;
    for (std::uint32_t m = rest; m; m &= m - 1) {
      std::size_t j = static_cast<std::size_t>(__builtin_ctz(m));
      ++pos;
      const R& e = a.upper(i, j);
      if (ring_traits<R>::is_zero(e)) continue;
      R t = e * self(self, rest & ~(1u << j));
      if (pos % 2)
        total += t;
      else
        total -= t;
    }
    memo.emplace(mask, total);
    return total;
  };
  std::uint32_t full = n == 32 ? 0xffffffffu : ((1u << n) - 1u);
  return rec(rec, full);
}

template <typename R>
R pfaffian_reduce(SkewMatrix<R> a) {
  const std::size_t n = a.size();
  if (n % 2) throw std::invalid_argument("Pfaffian of odd dimension");
  R result = ring_traits<R>::one_like(a.zero());
  // Working indices: rows k, k+1 are consumed at each step.
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    // Pick the pivot partner for row live[k].
    std::size_t best = n;
    double best_size = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      const R& e = a.at(live[k], live[j]);
      if (!ring_traits<R>::is_unit(e)) continue;
      double s = ring_traits<R>::pivot_size(e);
      if constexpr (is_exact_v<typename ring_traits<R>::scalar>) {
        best = j;
        break;
      } else if (best == n || s > best_size) {
        best = j;
        best_size = s;
      }
    }
    if (best == n) {
      std::vector<std::size_t> rest(live.begin() + static_cast<std::ptrdiff_t>(k), live.end());
      R tail = pfaffian_expand(a.select(rest));
      result = result * tail;
      return negate ? -result : result;
    }
    if (best != k + 1) {
      std::swap(live[k + 1], live[best]);
      negate = !negate;
    }
    const std::size_t p = live[k], q = live[k + 1];
    R piv = a.at(p, q);
    R inv = inverse_of(piv);
    result = result * piv;
    std::vector<R> u, v;
    u.reserve(n - k);
    v.reserve(n - k);
    for (std::size_t x = k + 2; x < n; ++x) {
      u.push_back(a.at(p, live[x]) * inv);
      v.push_back(a.at(q, live[x]));
    }
    for (std::size_t x = k + 2; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        // C_xy - (u_x v_y - v_x u_y) / a_pq
        const R& ux = u[x - k - 2];
        const R& uy = u[y - k - 2];
        R upd = ux * v[y - k - 2] - v[x - k - 2] * uy;
        R cur = a.at(live[x], live[y]);
        cur -= upd;
        a.set(live[x], live[y], std::move(cur));
      }
    }
  }
  return negate ? -result : result;
}

// Eliminates when a unit pivot is available, expanding otherwise.
template <typename R>
R pfaffian(const SkewMatrix<R>& a) {
  if constexpr (ring_traits<R>::has_units) {
    return pfaffian_reduce(a);
  } else {
    return pfaffian_expand(a);
  }
}

}  // namespace pfsop
