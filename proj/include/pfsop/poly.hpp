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

// Polynomials in the spectral variable z over a commutative ring R
// (scalars or jets). A zero element is carried so that jet-valued
// polynomials can be padded without knowing a truncation in advance.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pfsop/ring.hpp"

namespace pfsop {

template <typename R>
class Poly {
 public:
  explicit Poly(R zero) : zero_(std::move(zero)) {}
  Poly(R zero, std::vector<R> coeffs) : zero_(std::move(zero)), c_(std::move(coeffs)) {}

  static Poly monomial(const R& zero, std::size_t degree, const R& coeff) {
    Poly p(zero);
    p.c_.assign(degree + 1, zero);
    p.c_[degree] = coeff;
    return p;
  }

  const R& zero() const { return zero_; }
  std::size_t length() const { return c_.size(); }
  // Coefficient of z^i; zero beyond the stored range.
  const R& operator[](std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  R& at(std::size_t i) {
    if (i >= c_.size()) c_.resize(i + 1, zero_);
    return c_[i];
  }
  const std::vector<R>& coeffs() const { return c_; }

  // Degree after dropping zero leading coefficients; -1 for the zero polynomial.
  int degree() const {
    for (std::size_t i = c_.size(); i-- > 0;)
      if (!ring_traits<R>::is_zero(c_[i])) return static_cast<int>(i);
    return -1;
  }
  bool is_zero() const { return degree() < 0; }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  template <typename S>
  Poly scaled(const S& s) const {
    Poly r(*this);
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  template <typename S>
  friend Poly operator*(const Poly& p, const S& s) {
    return p.scaled(s);
  }

  // z^k * p, or p / z^k when k < 0 (the dropped coefficients must vanish).
  Poly shifted(int k) const {
    Poly r(zero_);
    if (k >= 0) {
      r.c_.assign(static_cast<std::size_t>(k), zero_);
      r.c_.insert(r.c_.end(), c_.begin(), c_.end());
      return r;
    }
    std::size_t drop = static_cast<std::size_t>(-k);
    for (std::size_t i = 0; i < std::min(drop, c_.size()); ++i)
      if (!ring_traits<R>::is_zero(c_[i])) throw std::domain_error("inexact division by z");
    if (drop < c_.size()) r.c_.assign(c_.begin() + static_cast<std::ptrdiff_t>(drop), c_.end());
    return r;
  }
  Poly times_z() const { return shifted(1); }

  R eval(const R& z) const {
    R acc = zero_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    return acc;
  }

  template <typename Fn>
  auto map(Fn fn) const -> Poly<std::decay_t<decltype(fn(std::declval<const R&>()))>> {
    using T = std::decay_t<decltype(fn(std::declval<const R&>()))>;
    Poly<T> r(fn(zero_));
    for (std::size_t i = 0; i < c_.size(); ++i) r.at(i) = fn(c_[i]);
    return r;
  }

 private:
  R zero_;
  std::vector<R> c_;
};

template <typename R>
bool operator==(const Poly<R>& a, const Poly<R>& b) {
  std::size_t n = std::max(a.length(), b.length());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

// Jet-valued polynomial helpers: value at the base point and first
// t_1-derivative, coefficientwise.
template <typename F>
Poly<F> base_of(const Poly<Jet<F>>& p) {
  return p.map([](const Jet<F>& j) { return j.base(); });
}
template <typename F>
Poly<F> d1_of(const Poly<Jet<F>>& p) {
  Poly<F> r{F(0)};
  for (std::size_t i = 0; i < p.length(); ++i) r.at(i) = p[i].d1();
  return r;
}

}  // namespace pfsop
