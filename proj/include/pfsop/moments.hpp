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

// Bi-moment / single-moment data. Time derivatives are never stored: the
// shift rule  d/dt_n mu_{i,j} = mu_{i+n,j} + mu_{i,j+n},
//             d/dt_n beta_j   = beta_{j+n}
// turns every derivative into a finite combination of entries.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfsop/jet.hpp"
#include "pfsop/scalar.hpp"

namespace pfsop {

enum class Constraint { none, laurent, rank2, rank1skew, rank1skew_multi, rank1skew_complex };

inline std::string constraint_name(Constraint c) {
  switch (c) {
    case Constraint::none: return "none";
    case Constraint::laurent: return "laurent";
    case Constraint::rank2: return "rank2";
    case Constraint::rank1skew: return "rank1skew";
    case Constraint::rank1skew_multi: return "rank1skew-multi";
    case Constraint::rank1skew_complex: return "rank1skew-complex";
  }
  return "none";
}

inline Constraint parse_constraint(const std::string& s) {
  for (auto c : {Constraint::none, Constraint::laurent, Constraint::rank2, Constraint::rank1skew,
                 Constraint::rank1skew_multi, Constraint::rank1skew_complex})
    if (constraint_name(c) == s) return c;
  if (s == "multi") return Constraint::rank1skew_multi;
  if (s == "complex") return Constraint::rank1skew_complex;
  throw std::invalid_argument("unknown constraint: " + s);
}

struct MomentId {
  enum class Kind { mu, beta, beta_bar };
  Kind kind = Kind::mu;
  int i = 0;  // mu: row; beta: component k
  int j = 0;  // mu: column; beta: index

  static MomentId mu(int i, int j) { return {Kind::mu, i, j}; }
  static MomentId beta(int k, int j) { return {Kind::beta, k, j}; }
  static MomentId beta_bar(int k, int j) { return {Kind::beta_bar, k, j}; }
};

template <typename F>
class MomentSystem {
 public:
  MomentSystem(int max_index, int components, Constraint tag, bool conjugate = false)
      : max_(max_index),
        tag_(tag),
        mu_(static_cast<std::size_t>((max_index + 1) * (max_index + 1)), F(0)),
        beta_(static_cast<std::size_t>(components),
              std::vector<F>(static_cast<std::size_t>(max_index + 1), F(0))) {
    if (max_index < 0) throw std::invalid_argument("negative max_index");
    if (components < 0) throw std::invalid_argument("negative component count");
    if (conjugate) beta_bar_ = beta_;
  }

  int max_index() const { return max_; }
  int components() const { return static_cast<int>(beta_.size()); }
  bool has_conjugate() const { return !beta_bar_.empty(); }
  Constraint constraint() const { return tag_; }
  void set_constraint(Constraint c) { tag_ = c; }

  const F& mu(int i, int j) const { return mu_[slot(i, j)]; }
  // Writes mu_{i,j} and mu_{j,i} = -mu_{i,j}.
  void set_mu(int i, int j, const F& v) {
    if (i == j) {
      if (!is_zero(v)) throw std::invalid_argument("diagonal bi-moment must vanish");
      return;
    }
    mu_[slot(i, j)] = v;
    mu_[slot(j, i)] = -v;
  }

  const F& beta(int k, int j) const { return row(beta_, k).at(index(j)); }
  const F& beta_bar(int k, int j) const {
    if (!has_conjugate()) throw std::logic_error("system has no conjugate single moments");
    return row(beta_bar_, k).at(index(j));
  }
  void set_beta(int k, int j, const F& v) { row(beta_, k).at(index(j)) = v; }
  void set_beta_bar(int k, int j, const F& v) {
    if (!has_conjugate()) throw std::logic_error("system has no conjugate single moments");
    row(beta_bar_, k).at(index(j)) = v;
  }

  const F& value(const MomentId& id) const {
    switch (id.kind) {
      case MomentId::Kind::mu: return mu(id.i, id.j);
      case MomentId::Kind::beta: return beta(id.i, id.j);
      case MomentId::Kind::beta_bar: return beta_bar(id.i, id.j);
    }
    throw std::logic_error("bad moment id");
  }

  bool operator==(const MomentSystem& o) const {
    return max_ == o.max_ && tag_ == o.tag_ && mu_ == o.mu_ && beta_ == o.beta_ &&
           beta_bar_ == o.beta_bar_;
  }

 private:
  std::size_t index(int j) const {
    if (j < 0 || j > max_) throw std::out_of_range("moment index " + std::to_string(j) + " beyond max_index");
    return static_cast<std::size_t>(j);
  }
  std::size_t slot(int i, int j) const {
    return index(i) * static_cast<std::size_t>(max_ + 1) + index(j);
  }
  template <typename V>
  static auto& row(V& rows, int k) {
    if (k < 1 || k > static_cast<int>(rows.size()))
      throw std::out_of_range("component " + std::to_string(k) + " not present");
    return rows[static_cast<std::size_t>(k - 1)];
  }

  int max_;
  Constraint tag_;
  std::vector<F> mu_;
  std::vector<std::vector<F>> beta_;
  std::vector<std::vector<F>> beta_bar_;
};

template <typename F>
F shift_derivative(const MomentSystem<F>& sys, const MomentId& id, int flow) {
  if (flow < 1) throw std::invalid_argument("flows start at t_1");
  switch (id.kind) {
    case MomentId::Kind::mu: return sys.mu(id.i + flow, id.j) + sys.mu(id.i, id.j + flow);
    case MomentId::Kind::beta: return sys.beta(id.i, id.j + flow);
    case MomentId::Kind::beta_bar: return sys.beta_bar(id.i, id.j + flow);
  }
  throw std::logic_error("bad moment id");
}

namespace detail {

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// Taylor jet of mu_{i,j}: the a-th coefficient is
//   (1/a!) sum_{b <= a} prod_n C(a_n, b_n) mu_{i + sum n b_n, j + sum n (a_n - b_n)}.
template <typename F>
Jet<F> lift_mu(const MomentSystem<F>& sys, int i, int j, const ShapePtr& shape) {
  Jet<F> out(shape);
  const std::size_t dirs = shape->directions();
  std::vector<int> b(dirs);
  for (std::size_t m = 0; m < shape->size(); ++m) {
    const auto& a = shape->monomial(m);
    F total(0);
    std::fill(b.begin(), b.end(), 0);
    while (true) {
      long c = 1;
      int di = 0, dj = 0;
      for (std::size_t d = 0; d < dirs; ++d) {
        c *= detail::binomial(a[d], b[d]);
        di += shape->flow(d) * b[d];
        dj += shape->flow(d) * (a[d] - b[d]);
      }
      total += F(c) * sys.mu(i + di, j + dj);
      std::size_t d = 0;
      while (d < dirs && b[d] == a[d]) b[d++] = 0;
      if (d == dirs) break;
      ++b[d];
    }
    out.coeff(m) = total / F(shape->factorial(m));
  }
  return out;
}

template <typename F>
Jet<F> lift_beta(const MomentSystem<F>& sys, int k, int j, bool bar, const ShapePtr& shape) {
  Jet<F> out(shape);
  for (std::size_t m = 0; m < shape->size(); ++m) {
    int w = shape->weight(m);
    const F& v = bar ? sys.beta_bar(k, j + w) : sys.beta(k, j + w);
    out.coeff(m) = v / F(shape->factorial(m));
  }
  return out;
}

template <typename F>
Jet<F> lift_to_jet(const MomentSystem<F>& sys, const MomentId& id, const ShapePtr& shape) {
  switch (id.kind) {
    case MomentId::Kind::mu: return lift_mu(sys, id.i, id.j, shape);
    case MomentId::Kind::beta: return lift_beta(sys, id.i, id.j, false, shape);
    case MomentId::Kind::beta_bar: return lift_beta(sys, id.i, id.j, true, shape);
  }
  throw std::logic_error("bad moment id");
}

// ---------------------------------------------------------------------------
// Constraint validation

template <typename F>
struct Violation {
  std::string what;
  int i = 0, j = 0;
  F residual;
};

template <typename F>
struct ValidationReport {
  Constraint constraint = Constraint::none;
  std::vector<Violation<F>> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

template <typename F>
F combined_beta(const MomentSystem<F>& sys, int j, bool bar) {
  F s(0);
  for (int k = 1; k <= sys.components(); ++k) s += bar ? sys.beta_bar(k, j) : sys.beta(k, j);
  return s;
}

template <typename F>
void check(ValidationReport<F>& rep, const char* what, int i, int j, const F& r, double tol) {
  bool bad = is_exact_v<F> ? !is_zero(r) : magnitude(r) > tol;
  if (bad) rep.violations.push_back({what, i, j, r});
}

}  // namespace detail

template <typename F>
ValidationReport<F> validate(const MomentSystem<F>& sys, double tol = 0.0) {
  ValidationReport<F> rep;
  rep.constraint = sys.constraint();
  const int M = sys.max_index();
  for (int i = 0; i <= M; ++i) {
    detail::check(rep, "diagonal", i, i, sys.mu(i, i), tol);
    for (int j = i + 1; j <= M; ++j) detail::check(rep, "antisymmetry", i, j, F(sys.mu(i, j) + sys.mu(j, i)), tol);
  }
  switch (sys.constraint()) {
    case Constraint::none: break;
    case Constraint::laurent:
      if (sys.components() != 1) rep.violations.push_back({"component count", 0, 0, F(sys.components())});
      for (int i = 1; i <= M; ++i)
        for (int j = i + 1; j <= M; ++j)
          detail::check(rep, "toeplitz", i, j, F(sys.mu(i, j) - sys.mu(i - 1, j - 1)), tol);
      for (int k = 1; k <= sys.components(); ++k)
        for (int j = 1; j <= M; ++j) detail::check(rep, "constant beta", k, j, F(sys.beta(k, j) - sys.beta(k, j - 1)), tol);
      break;
    case Constraint::rank2:
      if (sys.components() != 1) {
        rep.violations.push_back({"component count", 0, 0, F(sys.components())});
        break;
      }
      for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j) {
          F r = sys.mu(i, j + 1) + sys.mu(i + 1, j) - sys.beta(1, i + 1) * sys.beta(1, j) +
                sys.beta(1, i) * sys.beta(1, j + 1);
          detail::check(rep, "rank-two shift", i, j, r, tol);
        }
      break;
    case Constraint::rank1skew:
    case Constraint::rank1skew_multi:
    case Constraint::rank1skew_complex: {
      const bool cplx = sys.constraint() == Constraint::rank1skew_complex;
      if (cplx && !sys.has_conjugate()) {
        rep.violations.push_back({"conjugate data missing", 0, 0, F(0)});
        break;
      }
      if (sys.constraint() == Constraint::rank1skew && sys.components() != 1)
        rep.violations.push_back({"component count", 0, 0, F(sys.components())});
      std::vector<F> B, Bb;
      for (int j = 0; j <= M; ++j) {
        B.push_back(detail::combined_beta(sys, j, false));
        Bb.push_back(cplx ? detail::combined_beta(sys, j, true) : B.back());
      }
      for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j) {
          F rhs = B[i] * Bb[j] + Bb[i] * B[j];
          F r = sys.mu(i, j + 1) - sys.mu(i + 1, j) - rhs;
          detail::check(rep, "rank-one skew shift", i, j, r, tol);
        }
      break;
    }
  }
  return rep;
}

}  // namespace pfsop
