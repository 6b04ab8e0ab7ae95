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

// Pfaffians named by label lists, resolved through the entry rules
//   Pf(i,j) = mu_{i,j}      Pf(d_k,i) = beta^{(k)}_i   Pf(dbar_k,i) = conj data
//   Pf(i,z) = z^i           Pf(d*,z) = 0
//   Pf(d_0,i) = beta_i      Pf(d_1,i) = beta_{i+1}     Pf(d_0,d_1) = 0
// with Pf(b,a) = -Pf(a,b). Values are cached per context.

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfsop/moments.hpp"
#include "pfsop/pfaffian.hpp"
#include "pfsop/poly.hpp"

namespace pfsop {

struct Label {
  enum class Kind { index, d, dbar, d0, d1, z };
  Kind kind = Kind::index;
  int value = 0;  // index value or component number

  static Label idx(int i) { return {Kind::index, i}; }
  static Label d(int k = 1) { return {Kind::d, k}; }
  static Label dbar(int k = 1) { return {Kind::dbar, k}; }
  static Label d0() { return {Kind::d0, 0}; }
  static Label d1() { return {Kind::d1, 0}; }
  static Label z() { return {Kind::z, 0}; }

  bool is_d() const { return kind == Kind::d || kind == Kind::dbar || kind == Kind::d0 || kind == Kind::d1; }

  friend bool operator<(const Label& a, const Label& b) {
    return a.kind != b.kind ? a.kind < b.kind : a.value < b.value;
  }
  friend bool operator==(const Label& a, const Label& b) { return a.kind == b.kind && a.value == b.value; }
  friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }

  std::string str() const {
    switch (kind) {
      case Kind::index: return std::to_string(value);
      case Kind::d: return "d" + std::to_string(value);
      case Kind::dbar: return "dbar" + std::to_string(value);
      case Kind::d0: return "d_0";
      case Kind::d1: return "d_1";
      case Kind::z: return "z";
    }
    return "?";
  }
};

using Labels = std::vector<Label>;

// Consecutive indices lo..hi (empty when hi < lo).
inline Labels range(int lo, int hi) {
  Labels out;
  for (int i = lo; i <= hi; ++i) out.push_back(Label::idx(i));
  return out;
}
inline Labels operator+(Labels a, const Labels& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}
inline Labels operator+(Label a, const Labels& b) { return Labels{a} + b; }
inline Labels operator+(Labels a, Label b) {
  a.push_back(b);
  return a;
}

template <typename F, typename R = F>
class PfaffianContext {
 public:
  explicit PfaffianContext(const MomentSystem<F>& sys) : sys_(&sys) {
    static_assert(std::is_same_v<R, F>, "jet contexts need a shape");
  }
  PfaffianContext(const MomentSystem<F>& sys, ShapePtr shape) : sys_(&sys), shape_(std::move(shape)) {
    static_assert(std::is_same_v<R, Jet<F>>, "shape given for a scalar context");
  }

  const MomentSystem<F>& system() const { return *sys_; }
  const ShapePtr& shape() const { return shape_; }
  // How far above an index the jet lifts read.
  int reach() const { return shape_ ? shape_->ceiling() : 0; }

  R zero() const {
    if constexpr (std::is_same_v<R, F>) return F(0);
    else return Jet<F>(shape_);
  }
  R one() const {
    if constexpr (std::is_same_v<R, F>) return F(1);
    else return Jet<F>(shape_, F(1));
  }
  R constant(const F& v) const {
    if constexpr (std::is_same_v<R, F>) return v;
    else return Jet<F>(shape_, v);
  }

  void check_labels(const Labels& ls) const {
    int zs = 0;
    std::optional<Label> dk;
    bool has_d0 = false, has_d1 = false;
    for (const auto& l : ls) {
      switch (l.kind) {
        case Label::Kind::z: ++zs; break;
        case Label::Kind::index:
          if (l.value < 0) throw std::out_of_range("negative Pfaffian index");
          if (l.value + reach() > sys_->max_index())
            throw std::out_of_range("index " + std::to_string(l.value) + " exceeds the moment range");
          break;
        case Label::Kind::d:
        case Label::Kind::dbar:
          if (dk) throw std::invalid_argument("two component labels in one Pfaffian");
          if (l.value < 1 || l.value > sys_->components()) throw std::out_of_range("no such component");
          if (l.kind == Label::Kind::dbar && !sys_->has_conjugate())
            throw std::invalid_argument("conjugate label without conjugate data");
          dk = l;
          break;
        case Label::Kind::d0:
          if (has_d0) throw std::invalid_argument("repeated d_0");
          has_d0 = true;
          break;
        case Label::Kind::d1:
          if (has_d1) throw std::invalid_argument("repeated d_1");
          has_d1 = true;
          break;
      }
    }
    if (zs > 1) throw std::invalid_argument("at most one z label");
    if ((has_d0 || has_d1) && sys_->constraint() != Constraint::rank2)
      throw std::invalid_argument("labels d_0, d_1 need a rank2 system");
    if ((has_d0 || has_d1) && dk) throw std::invalid_argument("d_0/d_1 mixed with component labels");
    if ((has_d0 || has_d1) && sys_->components() != 1) throw std::invalid_argument("rank2 systems are one-component");
  }

  // Entry Pf(a,b) for labels other than z.
  R entry(const Label& a, const Label& b) const {
    if (a.kind == Label::Kind::z || b.kind == Label::Kind::z) throw std::logic_error("z entries are polynomial");
    if (a.kind == Label::Kind::index && b.kind == Label::Kind::index) return mu(a.value, b.value);
    if (a.is_d() && b.is_d()) {
      if ((a.kind == Label::Kind::d0 && b.kind == Label::Kind::d1) ||
          (a.kind == Label::Kind::d1 && b.kind == Label::Kind::d0))
        return zero();
      throw std::invalid_argument("no entry rule for Pf(" + a.str() + "," + b.str() + ")");
    }
    if (b.is_d()) return -entry(b, a);
    const int i = b.value;
    switch (a.kind) {
      case Label::Kind::d: return beta(a.value, i, false);
      case Label::Kind::dbar: return beta(a.value, i, true);
      case Label::Kind::d0: return beta(1, i, false);
      case Label::Kind::d1: return beta(1, i + 1, false);
      default: break;
    }
    throw std::logic_error("unreachable entry rule");
  }

  // Pfaffian of a z-free label list.
  R pf(const Labels& ls) const {
    for (const auto& l : ls)
      if (l.kind == Label::Kind::z) throw std::invalid_argument("use pf_z for lists containing z");
    if (ls.size() % 2) throw std::invalid_argument("odd label list");
    if (ls.empty()) return one();
    {
      std::lock_guard<std::mutex> lock(mu_lock_);
      auto it = cache_.find(ls);
      if (it != cache_.end()) return it->second;
    }
    check_labels(ls);
    SkewMatrix<R> a(ls.size(), zero());
    for (std::size_t i = 0; i < ls.size(); ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j) a.set(i, j, entry(ls[i], ls[j]));
    R v = pfaffian(a);
    std::lock_guard<std::mutex> lock(mu_lock_);
    cache_.emplace(ls, v);
    return v;
  }

  // Pfaffian of a list with exactly one z, as a polynomial in z. With z
  // moved last, the coefficient of z^{a_j} is (-1)^j Pf(list without a_j).
  Poly<R> pf_z(const Labels& ls) const {
    if (ls.size() % 2) throw std::invalid_argument("odd label list");
    check_labels(ls);
    Labels rest;
    int sign = 1;
    bool found = false;
    for (std::size_t p = 0; p < ls.size(); ++p) {
      if (ls[p].kind == Label::Kind::z) {
        found = true;
        if ((ls.size() - 1 - p) % 2) sign = -sign;
      } else {
        rest.push_back(ls[p]);
      }
    }
    if (!found) throw std::invalid_argument("pf_z needs a z label");
    Poly<R> out(zero());
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j].kind != Label::Kind::index) continue;
      Labels minor;
      for (std::size_t q = 0; q < rest.size(); ++q)
        if (q != j) minor.push_back(rest[q]);
      R v = pf(minor);
      if ((j % 2 == 1) != (sign < 0))
        out.at(static_cast<std::size_t>(rest[j].value)) -= v;
      else
        out.at(static_cast<std::size_t>(rest[j].value)) += v;
    }
    return out;
  }

  // Any label list; constant polynomial when no z is present.
  Poly<R> pf_indexed(const Labels& ls) const {
    for (const auto& l : ls)
      if (l.kind == Label::Kind::z) return pf_z(ls);
    Poly<R> p(zero());
    p.at(0) = pf(ls);
    return p;
  }

  // tau_n^{(m)}: Pf(m..m+n-1) for even n, Pf(d_k, m..m+n-1) for odd n;
  // tau_{-1} = tau_{-2} = 0.
  R tau(int n, int m, int k = 1, bool bar = false) const {
    if (n == -1 || n == -2) return zero();
    if (n < -2) throw std::out_of_range("tau order below -2");
    if (n % 2 == 0) return pf(range(m, m + n - 1));
    return pf((bar ? Label::dbar(k) : Label::d(k)) + range(m, m + n - 1));
  }

 private:
  R mu(int i, int j) const {
    if constexpr (std::is_same_v<R, F>) {
      return sys_->mu(i, j);
    } else {
      std::lock_guard<std::mutex> lock(mu_lock_);
      auto key = std::make_pair(i, j);
      auto it = lifts_.find(key);
      if (it != lifts_.end()) return it->second;
      Jet<F> v = lift_mu(*sys_, i, j, shape_);
      lifts_.emplace(key, v);
      return v;
    }
  }
  R beta(int k, int j, bool bar) const {
    if constexpr (std::is_same_v<R, F>) {
      return bar ? sys_->beta_bar(k, j) : sys_->beta(k, j);
    } else {
      return lift_beta(*sys_, k, j, bar, shape_);
    }
  }

  const MomentSystem<F>* sys_;
  ShapePtr shape_;
  mutable std::mutex mu_lock_;
  mutable std::map<Labels, R> cache_;
  mutable std::map<std::pair<int, int>, Jet<F>> lifts_;
};

}  // namespace pfsop
