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

// Dense determinant and linear solve over a field. Exact fields pivot on
// the first nonzero entry, doubles on the largest magnitude.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pfsop/scalar.hpp"

namespace pfsop {

template <typename F>
using DenseMatrix = std::vector<std::vector<F>>;

namespace detail {

template <typename F>
std::size_t choose_pivot(const DenseMatrix<F>& a, std::size_t col, std::size_t from) {
  std::size_t best = a.size();
  double best_mag = 0.0;
  for (std::size_t r = from; r < a.size(); ++r) {
    if (is_zero(a[r][col])) continue;
    if constexpr (is_exact_v<F>) return r;
    double mag = magnitude(a[r][col]);
    if (mag > best_mag) {
      best_mag = mag;
      best = r;
    }
  }
  return best;
}

}  // namespace detail

template <typename F>
F determinant(DenseMatrix<F> a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
  F det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::choose_pivot(a, c, c);
    if (p == n) return F(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    F inv = F(1) / a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(a[r][c])) continue;
      F f = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// Solution of a x = b for square nonsingular a.
template <typename F>
std::vector<F> solve(DenseMatrix<F> a, std::vector<F> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("right-hand side size mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::choose_pivot(a, c, c);
    if (p == n) throw std::domain_error("singular system");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    F inv = F(1) / a[c][c];
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a[r][c])) continue;
      F f = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) b[c] = b[c] / a[c][c];
  return b;
}

}  // namespace pfsop
