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

// Dense and banded truncations of semi-infinite operators. Entries may be
// scalars or jets; every operator here is N x N with indices from 0.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pfsop/poly.hpp"
#include "pfsop/ring.hpp"

namespace pfsop {

template <typename R>
class Mat {
 public:
  Mat(std::size_t n, R zero) : n_(n), zero_(zero), a_(n * n, zero) {}

  static Mat identity(std::size_t n, const R& zero, const R& one) {
    Mat m(n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }
  // Lower shift: (Lambda)_{i+1,i} = 1.
  static Mat lower_shift(std::size_t n, const R& zero, const R& one) {
    Mat m(n, zero);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i + 1, i) = one;
    return m;
  }
  static Mat diagonal(const std::vector<R>& d, const R& zero) {
    Mat m(d.size(), zero);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }
  const R& zero() const { return zero_; }
  R& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Mat transposed() const {
    Mat t(n_, zero_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat& operator+=(const Mat& o) {
    check(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(const Mat& a, const Mat& b) {
    a.check(b);
    Mat c(a.n_, a.zero_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const R& x = a(i, k);
        if (ring_traits<R>::is_zero(x)) continue;
        for (std::size_t j = 0; j < a.n_; ++j)
          if (!ring_traits<R>::is_zero(b(k, j))) c(i, j) += x * b(k, j);
      }
    return c;
  }

  // Inverse of a triangular matrix with unit-valued diagonal entries, by
  // substitution. Exact: no truncation beyond the matrix itself.
  Mat triangular_inverse() const {
    bool lower = true, upper = true;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (ring_traits<R>::is_zero((*this)(i, j))) continue;
        if (j > i) lower = false;
        if (j < i) upper = false;
      }
    if (!lower && !upper) throw std::invalid_argument("matrix is not triangular");
    if (!lower) return transposed().triangular_inverse().transposed();
    std::vector<R> dinv;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!ring_traits<R>::is_unit((*this)(i, i))) throw std::domain_error("singular triangular matrix");
      dinv.push_back(inverse_of((*this)(i, i)));
    }
    Mat inv(n_, zero_);
    for (std::size_t j = 0; j < n_; ++j) {
      inv(j, j) = dinv[j];
      for (std::size_t i = j + 1; i < n_; ++i) {
        R acc = zero_;
        for (std::size_t k = j; k < i; ++k)
          if (!ring_traits<R>::is_zero((*this)(i, k))) acc += (*this)(i, k) * inv(k, j);
        inv(i, j) = -(acc * dinv[i]);
      }
    }
    return inv;
  }

  template <typename Fn>
  auto map(Fn fn) const -> Mat<std::decay_t<decltype(fn(std::declval<const R&>()))>> {
    Mat<std::decay_t<decltype(fn(std::declval<const R&>()))>> out(n_, fn(zero_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out(i, j) = fn((*this)(i, j));
    return out;
  }

  // Row action on a vector of polynomials: (A Phi)_i.
  Poly<R> apply_row(std::size_t i, const std::vector<Poly<R>>& phi) const {
    Poly<R> acc(zero_);
    for (std::size_t j = 0; j < n_ && j < phi.size(); ++j)
      if (!ring_traits<R>::is_zero((*this)(i, j))) acc += phi[j].scaled((*this)(i, j));
    return acc;
  }

 private:
  void check(const Mat& o) const {
    if (o.n_ != n_) throw std::invalid_argument("operator size mismatch");
  }
  std::size_t n_;
  R zero_;
  std::vector<R> a_;
};

// Band representation: offset -> diagonal entries, offset = column - row.
template <typename R>
struct BandedOp {
  std::size_t n = 0;
  std::map<int, std::vector<R>> bands;

  static BandedOp from(const Mat<R>& m, const std::vector<int>& offsets) {
    BandedOp b;
    b.n = m.size();
    for (int off : offsets) {
      std::vector<R> d;
      for (std::size_t i = 0; i < m.size(); ++i) {
        long j = static_cast<long>(i) + off;
        if (j >= 0 && j < static_cast<long>(m.size())) d.push_back(m(i, static_cast<std::size_t>(j)));
      }
      b.bands.emplace(off, std::move(d));
    }
    return b;
  }
};

}  // namespace pfsop
