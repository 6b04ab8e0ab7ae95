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

// Reference computations the tests compare against. None of them reuse the
// library's elimination or Pfaffian code paths.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "pfsop/pfaffian.hpp"
#include "pfsop/scalar.hpp"

namespace oracle {

using pfsop::Rational;
using Matrix = std::vector<std::vector<Rational>>;

// Bareiss elimination: integer-preserving on integer input, exact on
// rationals. Every division is exact by Sylvester's identity.
inline Rational bareiss_det(Matrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Rational prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(a[r][k]) == 0) ++r;
      if (r == n) return 0;
      std::swap(a[r], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Sum over permutations; only for n <= 7.
inline Rational leibniz_det(const Matrix& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Rational total = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
    Rational t = inv % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) t *= a[i][p[i]];
    total += t;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Pfaffian as a sum over perfect matchings, with the crossing sign.
inline Rational matching_pfaffian(const Matrix& a) {
  const std::size_t n = a.size();
  if (n % 2) return 0;
  std::vector<std::size_t> left(n);
  std::iota(left.begin(), left.end(), 0);
  auto rec = [&](auto&& self, std::vector<std::size_t> rest) -> Rational {
    if (rest.empty()) return 1;
    Rational total = 0;
    const std::size_t i = rest[0];
    for (std::size_t pos = 1; pos < rest.size(); ++pos) {
      std::vector<std::size_t> sub;
      for (std::size_t q = 1; q < rest.size(); ++q)
        if (q != pos) sub.push_back(rest[q]);
      Rational t = a[i][rest[pos]] * self(self, sub);
      total += (pos % 2) ? t : Rational(-t);
    }
    return total;
  };
  return rec(rec, left);
}

// Entries p/q with |p| <= bound, 1 <= q <= bound.
inline Matrix random_skew(std::mt19937_64& rng, std::size_t n, int bound = 7) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  Matrix a(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational v(num(rng), den(rng));
      v.canonicalize();
      a[i][j] = v;
      a[j][i] = -v;
    }
  return a;
}

template <typename R>
pfsop::SkewMatrix<R> to_skew(const Matrix& a) {
  pfsop::SkewMatrix<R> s(a.size(), R(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) s.set(i, j, R(a[i][j]));
  return s;
}

}  // namespace oracle
