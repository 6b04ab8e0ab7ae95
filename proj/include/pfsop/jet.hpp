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

// Truncated multivariate Taylor ring. Direction d stands for the time
// t_{flow(d)}; a monomial a is kept when a_d <= cap(d) for every d and
// sum_d flow(d) * a_d <= ceiling. Stored coefficients are
// partial^a f / a!, so extract() multiplies back by a!.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "pfsop/scalar.hpp"

namespace pfsop {

class JetShape;
using ShapePtr = std::shared_ptr<const JetShape>;

class JetShape {
 public:
  struct Term {
    std::uint32_t a, b, out;
  };

  // Shapes are interned: equal parameters give the same pointer, so a
  // pointer comparison is the order check on every binary operation.
  static ShapePtr make(std::vector<int> flows, std::vector<int> caps, int ceiling) {
    static std::mutex mu;
    static std::map<std::tuple<std::vector<int>, std::vector<int>, int>, ShapePtr> pool;
    if (flows.size() != caps.size()) throw std::invalid_argument("flows/caps size mismatch");
    for (std::size_t d = 0; d < flows.size(); ++d) {
      if (flows[d] < 1 || caps[d] < 0) throw std::invalid_argument("bad jet direction");
    }
    if (ceiling < 0) throw std::invalid_argument("negative jet ceiling");
    auto key = std::make_tuple(flows, caps, ceiling);
    std::lock_guard<std::mutex> lock(mu);
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    ShapePtr s(new JetShape(std::move(flows), std::move(caps), ceiling));
    pool.emplace(std::move(key), s);
    return s;
  }

  // Orders (p, q) along t_1 and t_2.
  static ShapePtr box(int order1, int order2) {
    return make({1, 2}, {order1, order2}, order1 + 2 * order2);
  }

  // Every t_l with l <= w, weighted degree at most w. Enough to apply any
  // Schur operator s_k(+-d~) with k <= w.
  static ShapePtr weighted(int w) {
    std::vector<int> flows, caps;
    for (int l = 1; l <= std::max(w, 1); ++l) {
      flows.push_back(l);
      caps.push_back(w / l);
    }
    return make(std::move(flows), std::move(caps), w);
  }

  std::size_t size() const { return mons_.size(); }
  std::size_t directions() const { return flows_.size(); }
  int flow(std::size_t d) const { return flows_.at(d); }
  int cap(std::size_t d) const { return caps_.at(d); }
  int ceiling() const { return ceiling_; }
  const std::vector<int>& flows() const { return flows_; }
  const std::vector<int>& caps() const { return caps_; }
  const std::vector<int>& monomial(std::size_t i) const { return mons_.at(i); }
  int weight(std::size_t i) const { return weights_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  int max_degree() const { return max_degree_; }
  long factorial(std::size_t i) const { return factorials_[i]; }
  const std::vector<Term>& terms() const { return terms_; }

  std::optional<std::size_t> find(const std::vector<int>& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> direction_of(int flow) const {
    for (std::size_t d = 0; d < flows_.size(); ++d)
      if (flows_[d] == flow) return d;
    return std::nullopt;
  }

  // Shape of the derivative along direction d.
  ShapePtr reduced(std::size_t d) const {
    if (caps_.at(d) == 0 || ceiling_ < flows_[d])
      throw std::out_of_range("derivative leaves the truncation");
    std::vector<int> caps = caps_;
    caps[d] -= 1;
    return make(flows_, std::move(caps), ceiling_ - flows_[d]);
  }

  // True when every monomial of `other` is a monomial of this shape.
  bool contains(const JetShape& other) const {
    if (other.flows_ != flows_) return false;
    for (const auto& a : other.mons_)
      if (!find(a)) return false;
    return true;
  }

 private:
  JetShape(std::vector<int> flows, std::vector<int> caps, int ceiling)
      : flows_(std::move(flows)), caps_(std::move(caps)), ceiling_(ceiling) {
    std::vector<int> a(flows_.size(), 0);
    enumerate(0, 0, a);
    // Graded order: the constant term first, then by total degree.
    std::stable_sort(mons_.begin(), mons_.end(), [](const auto& x, const auto& y) {
      int dx = 0, dy = 0;
      for (int v : x) dx += v;
      for (int v : y) dy += v;
      return dx < dy;
    });
    max_degree_ = 0;
    for (std::size_t i = 0; i < mons_.size(); ++i) {
      index_.emplace(mons_[i], i);
      int w = 0, deg = 0;
      long f = 1;
      for (std::size_t d = 0; d < flows_.size(); ++d) {
        w += flows_[d] * mons_[i][d];
        deg += mons_[i][d];
        for (int k = 2; k <= mons_[i][d]; ++k) f *= k;
      }
      weights_.push_back(w);
      degrees_.push_back(deg);
      factorials_.push_back(f);
      max_degree_ = std::max(max_degree_, deg);
    }
    std::vector<int> c(flows_.size());
    for (std::size_t i = 0; i < mons_.size(); ++i) {
      for (std::size_t j = 0; j < mons_.size(); ++j) {
        if (weights_[i] + weights_[j] > ceiling_) continue;
        for (std::size_t d = 0; d < c.size(); ++d) c[d] = mons_[i][d] + mons_[j][d];
        if (auto k = find(c)) {
          terms_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(*k)});
        }
      }
    }
  }

  void enumerate(std::size_t d, int w, std::vector<int>& a) {
    if (d == flows_.size()) {
      mons_.push_back(a);
      return;
    }
    for (int e = 0; e <= caps_[d] && w + e * flows_[d] <= ceiling_; ++e) {
      a[d] = e;
      enumerate(d + 1, w + e * flows_[d], a);
    }
    a[d] = 0;
  }

  std::vector<int> flows_, caps_;
  int ceiling_;
  std::vector<std::vector<int>> mons_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<int> weights_, degrees_;
  std::vector<long> factorials_;
  int max_degree_ = 0;
  std::vector<Term> terms_;
};

template <typename F>
class Jet {
 public:
  Jet() = default;
  explicit Jet(ShapePtr shape) : shape_(std::move(shape)), c_(shape_->size(), F(0)) {}
  Jet(ShapePtr shape, const F& value) : Jet(std::move(shape)) { c_[0] = value; }

  // value + t_flow (the coordinate function along one direction).
  static Jet variable(ShapePtr shape, int flow, const F& value) {
    Jet j(shape, value);
    auto d = shape->direction_of(flow);
    if (!d) throw std::out_of_range("no such jet direction");
    std::vector<int> a(shape->directions(), 0);
    a[*d] = 1;
    auto i = shape->find(a);
    if (!i) throw std::out_of_range("direction truncated away");
    j.c_[*i] = F(1);
    return j;
  }

  const ShapePtr& shape() const { return shape_; }
  std::size_t size() const { return c_.size(); }
  const F& base() const { return c_.at(0); }
  const F& coeff(std::size_t i) const { return c_.at(i); }
  F& coeff(std::size_t i) { return c_.at(i); }
  const std::vector<F>& coeffs() const { return c_; }

  // The mixed partial derivative partial^a at the base point.
  F extract(const std::vector<int>& a) const {
    auto i = shape_->find(a);
    if (!i) throw std::out_of_range("derivative order outside the truncation");
    return c_[*i] * F(shape_->factorial(*i));
  }
  F extract(int p, int q) const {
    std::vector<int> a(shape_->directions(), 0);
    auto d1 = shape_->direction_of(1);
    auto d2 = shape_->direction_of(2);
    if ((p && !d1) || (q && !d2)) throw std::out_of_range("direction absent from jet");
    if (d1) a[*d1] = p;
    if (d2) a[*d2] = q;
    return extract(a);
  }
  F d1() const { return extract(1, 0); }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!pfsop::is_zero(x)) return false;
    return true;
  }
  bool is_unit() const { return !pfsop::is_zero(c_[0]); }

  Jet derivative(int flow) const {
    auto d = shape_->direction_of(flow);
    if (!d) throw std::out_of_range("no such jet direction");
    Jet r(shape_->reduced(*d));
    std::vector<int> b;
    for (std::size_t i = 0; i < r.size(); ++i) {
      b = r.shape_->monomial(i);
      b[*d] += 1;
      r.c_[i] = c_[*shape_->find(b)] * F(b[*d]);
    }
    return r;
  }

  // Projection onto a smaller truncation with the same directions.
  Jet restrict_to(const ShapePtr& target) const {
    if (!shape_->contains(*target)) throw std::invalid_argument("cannot restrict jet");
    Jet r(target);
    for (std::size_t i = 0; i < r.size(); ++i) r.c_[i] = c_[*shape_->find(target->monomial(i))];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const F& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this * o.inverse(); }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator*(Jet a, const F& s) { return a *= s; }
  friend Jet operator*(const F& s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check(b);
    Jet r(a.shape_);
    std::vector<bool> nz(b.c_.size());
    for (std::size_t j = 0; j < nz.size(); ++j) nz[j] = !pfsop::is_zero(b.c_[j]);
    std::vector<bool> nza(a.c_.size());
    for (std::size_t i = 0; i < nza.size(); ++i) nza[i] = !pfsop::is_zero(a.c_[i]);
    F t;
    for (const auto& term : a.shape_->terms()) {
      if (!nza[term.a] || !nz[term.b]) continue;
      t = a.c_[term.a] * b.c_[term.b];
      r.c_[term.out] += t;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inverse(); }
  friend Jet operator/(Jet a, const F& s) {
    F inv = F(1) / s;
    return a *= inv;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.shape_ == b.shape_ && a.c_ == b.c_;
  }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

  // Newton iteration x <- x (2 - a x), exact once 2^k exceeds the top
  // degree of the truncation. Defined only for units.
  Jet inverse() const {
    if (!is_unit()) throw std::domain_error("jet is not a unit");
    Jet x(shape_, F(1) / c_[0]);
    Jet two(shape_, F(2));
    for (int prec = 1; prec <= shape_->max_degree(); prec *= 2) x = x * (two - *this * x);
    return x;
  }

 private:
  void check(const Jet& o) const {
    if (shape_ != o.shape_) throw std::invalid_argument("jet truncation mismatch");
  }

  ShapePtr shape_;
  std::vector<F> c_;
};

}  // namespace pfsop
