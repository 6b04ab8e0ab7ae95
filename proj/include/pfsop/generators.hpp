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

// Random moment systems satisfying each constraint exactly.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pfsop/moments.hpp"

namespace pfsop {

struct GenParams {
  Constraint kind = Constraint::none;
  int max_index = 12;
  int components = 1;
  int bound = 5;  // numerators in [-bound, bound], denominators in [1, bound]
  std::uint64_t seed = 1;
};

class RationalSampler {
 public:
  RationalSampler(std::uint64_t seed, int bound) : rng_(seed), bound_(bound) {
    if (bound < 1) throw std::invalid_argument("sample bound must be positive");
  }
  // Nonzero small rational.
  Rational next() {
    std::uniform_int_distribution<int> num(-bound_, bound_), den(1, bound_);
    int p = 0;
    while (p == 0) p = num(rng_);
    Rational q(p, den(rng_));
    q.canonicalize();
    return q;
  }
  GaussianRational next_gaussian() {
    Rational a = next();
    Rational b = next();
    return GaussianRational(a, b);
  }

 private:
  std::mt19937_64 rng_;
  int bound_;
};

// Moment range needed to evaluate tau up to order 2 n_max + 1 at shifts
// m <= m_max with jets carrying derivative orders (order1, order2).
constexpr int required_max_index(int n_max, int m_max, int order1, int order2) {
  return m_max + 2 * n_max + 2 * (order1 + order2) + 2;
}

namespace detail {

inline void check_params(const GenParams& p) {
  if (p.max_index < 2) throw std::invalid_argument("max_index must be at least 2");
  if (p.components < 0 || p.components > 8) throw std::invalid_argument("component count out of range");
  switch (p.kind) {
    case Constraint::laurent:
      if (p.components != 1) throw std::invalid_argument("laurent systems carry one constant single-moment sequence");
      break;
    case Constraint::rank2:
      if (p.components != 1) throw std::invalid_argument("rank2 systems are one-component");
      break;
    case Constraint::rank1skew:
      if (p.components != 1) throw std::invalid_argument("rank1skew is one-component; use rank1skew-multi");
      break;
    case Constraint::rank1skew_multi:
    case Constraint::rank1skew_complex:
      if (p.components < 1) throw std::invalid_argument("at least one component required");
      break;
    case Constraint::none: break;
  }
}

// mu_{i,j+1} - mu_{i+1,j} = 2 c(i,j) with c symmetric. Each antidiagonal
// i + j = s is filled from its middle outwards: mu_{k,k+1} = c(k,k) when s
// is odd, mu_{k,k} = 0 when s is even, then
//   mu_{i,s-i} = mu_{i+1,s-i-1} + 2 c(i, s-i-1).
template <typename F, typename C>
void fill_rank1skew(MomentSystem<F>& sys, C c) {
  const int M = sys.max_index();
  for (int s = 1; s <= 2 * M - 1; ++s) {
    const int k = s / 2;
    F cur(0);
    if (s % 2) {
      cur = c(k, k);
      sys.set_mu(k, k + 1, cur);
    }
    for (int i = k - 1; i >= 0 && s - i <= M; --i) {
      cur = cur + F(2) * c(i, s - i - 1);
      sys.set_mu(i, s - i, cur);
    }
  }
}

}  // namespace detail

// Kinds none, laurent, rank2, rank1skew, rank1skew-multi over the rationals.
inline MomentSystem<Rational> generate(const GenParams& p) {
  detail::check_params(p);
  if (p.kind == Constraint::rank1skew_complex)
    throw std::invalid_argument("complex systems need generate_complex");
  RationalSampler rs(p.seed, p.bound);
  const int M = p.max_index;
  MomentSystem<Rational> sys(M, p.components, p.kind);
  switch (p.kind) {
    case Constraint::none:
      for (int i = 0; i <= M; ++i)
        for (int j = i + 1; j <= M; ++j) sys.set_mu(i, j, rs.next());
      for (int k = 1; k <= p.components; ++k)
        for (int j = 0; j <= M; ++j) sys.set_beta(k, j, rs.next());
      break;
    case Constraint::laurent: {
      std::vector<Rational> seq(static_cast<std::size_t>(M + 1));
      for (int d = 1; d <= M; ++d) seq[static_cast<std::size_t>(d)] = rs.next();
      for (int i = 0; i <= M; ++i)
        for (int j = i + 1; j <= M; ++j) sys.set_mu(i, j, seq[static_cast<std::size_t>(j - i)]);
      Rational b = rs.next();
      for (int j = 0; j <= M; ++j) sys.set_beta(1, j, b);
      break;
    }
    case Constraint::rank2: {
      // Propagate mu_{i+1,j} = b(i,j) - mu_{i,j+1} along each antidiagonal
      // from the first row. Entries of the first row beyond max_index feed
      // the lower rows, so the table is built to size 2M and cut.
      const int W = 2 * M + 1;
      std::vector<Rational> beta(static_cast<std::size_t>(W + 2));
      for (auto& x : beta) x = rs.next();
      auto b = [&](int i, int j) {
        return Rational(beta[i + 1] * beta[j] - beta[i] * beta[j + 1]);
      };
      std::vector<std::vector<Rational>> full(static_cast<std::size_t>(W + 1),
                                              std::vector<Rational>(static_cast<std::size_t>(W + 1)));
      for (int s = 0; s <= W; ++s) {
        auto propagate = [&](const Rational& head) {
          std::vector<Rational> vals{head};
          for (int i = 0; i < s; ++i) vals.push_back(b(i, s - 1 - i) - vals.back());
          return vals;
        };
        Rational head;
        if (s % 2) {
          head = rs.next();
        } else {
          // The middle entry mu_{s/2,s/2} must vanish; it depends on the
          // head with sign (-1)^{s/2}.
          int k = s / 2;
          auto probe = propagate(Rational(0));
          head = (k % 2 == 0) ? Rational(-probe[k]) : probe[k];
        }
        auto vals = propagate(head);
        for (int i = 0; i <= s; ++i) full[i][s - i] = vals[i];
      }
      for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j)
          if (full[i][j] != -full[j][i]) throw std::logic_error("rank2 propagation lost antisymmetry");
      for (int i = 0; i <= M; ++i)
        for (int j = i + 1; j <= M; ++j) sys.set_mu(i, j, full[i][j]);
      for (int j = 0; j <= M; ++j) sys.set_beta(1, j, beta[j]);
      break;
    }
    case Constraint::rank1skew:
    case Constraint::rank1skew_multi: {
      for (int k = 1; k <= p.components; ++k)
        for (int j = 0; j <= M; ++j) sys.set_beta(k, j, rs.next());
      std::vector<Rational> B(static_cast<std::size_t>(M + 1));
      for (int j = 0; j <= M; ++j) B[j] = detail::combined_beta(sys, j, false);
      detail::fill_rank1skew(sys, [&](int i, int j) { return Rational(B[i] * B[j]); });
      break;
    }
    case Constraint::rank1skew_complex: break;
  }
  auto rep = validate(sys);
  if (!rep.ok()) throw std::logic_error("generator produced an invalid system (" + rep.violations[0].what + ")");
  return sys;
}

// rank1skew-complex over the Gaussian rationals: beta random, beta_bar its
// conjugate, and mu_{i,j+1} - mu_{i+1,j} = B_i Bbar_j + Bbar_i B_j.
inline MomentSystem<GaussianRational> generate_complex(const GenParams& p) {
  detail::check_params(p);
  if (p.kind != Constraint::rank1skew_complex) throw std::invalid_argument("generate_complex needs kind rank1skew-complex");
  RationalSampler rs(p.seed, p.bound);
  const int M = p.max_index;
  MomentSystem<GaussianRational> sys(M, p.components, p.kind, true);
  for (int k = 1; k <= p.components; ++k)
    for (int j = 0; j <= M; ++j) {
      GaussianRational v = rs.next_gaussian();
      sys.set_beta(k, j, v);
      sys.set_beta_bar(k, j, conj(v));
    }
  std::vector<GaussianRational> B, Bb;
  for (int j = 0; j <= M; ++j) {
    B.push_back(detail::combined_beta(sys, j, false));
    Bb.push_back(detail::combined_beta(sys, j, true));
  }
  detail::fill_rank1skew(sys, [&](int i, int j) {
    GaussianRational c = B[i] * Bb[j] + Bb[i] * B[j];
    return c * GaussianRational(Rational(1, 2));
  });
  auto rep = validate(sys);
  if (!rep.ok()) throw std::logic_error("generator produced an invalid system (" + rep.violations[0].what + ")");
  return sys;
}

// Embeds a rational system into the Gaussian rationals (imaginary parts 0).
inline MomentSystem<GaussianRational> to_gaussian(const MomentSystem<Rational>& s) {
  MomentSystem<GaussianRational> g(s.max_index(), s.components(), s.constraint());
  for (int i = 0; i <= s.max_index(); ++i)
    for (int j = i + 1; j <= s.max_index(); ++j) g.set_mu(i, j, GaussianRational(s.mu(i, j)));
  for (int k = 1; k <= s.components(); ++k)
    for (int j = 0; j <= s.max_index(); ++j) g.set_beta(k, j, GaussianRational(s.beta(k, j)));
  return g;
}

}  // namespace pfsop
