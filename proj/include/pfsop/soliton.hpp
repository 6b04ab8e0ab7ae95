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

// Exponential (soliton) moment data. Each node x_a carries the phase
// theta_a = sum_n t_n x_a^n, and
//   mu_{ij} = sum_{pairs} c_ab (x_a^i x_b^j - x_b^i x_a^j) e^{theta_a + theta_b},
//   beta_j^{(k)} = sum_a d_a^{(k)} x_a^j e^{theta_a},
// which obey the shift rule in every t_n exactly.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pfsop/moments.hpp"

namespace pfsop {

template <typename F>
struct SolitonSpec {
  struct Pair {
    int a, b;
    F c;
  };
  std::vector<F> nodes;
  std::vector<Pair> pairs;
  std::vector<std::vector<F>> d;  // d[k-1][a]
  std::vector<double> times;      // t_1, t_2, ...
};

// Pairs (x, 1/x): mu_{ij} then depends on i - j only and beta vanishes,
// so the data is Toeplitz.
template <typename F>
SolitonSpec<F> reciprocal_soliton(const std::vector<F>& x, const std::vector<F>& c, double t1 = 0.0) {
  if (x.size() != c.size()) throw std::invalid_argument("one amplitude per node pair");
  SolitonSpec<F> s;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (is_zero(x[a])) throw std::invalid_argument("soliton nodes must be nonzero");
    s.nodes.push_back(x[a]);
    s.nodes.push_back(F(1) / x[a]);
    s.pairs.push_back({static_cast<int>(2 * a), static_cast<int>(2 * a + 1), c[a]});
  }
  s.times = {t1};
  return s;
}

// Seeded floating soliton data for the float verify mode: `pairs` node
// pairs with nodes of modulus in [0.5, 1.2] and random sign (wider or
// tighter clusters make the moment Pfaffians ill-conditioned), amplitudes
// and single-moment weights in [0.5, 1.5], flow times t_1, t_2 in
// [-0.5, 0.5].
template <typename F>
SolitonSpec<F> random_soliton(std::uint64_t seed, int pairs, int components) {
  static_assert(!is_exact_v<F>, "random soliton data is floating");
  if (pairs < 1 || components < 0) throw std::invalid_argument("need at least one node pair");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(0.5, 1.2), amp(0.5, 1.5), time(-0.5, 0.5);
  SolitonSpec<F> s;
  for (int a = 0; a < 2 * pairs; ++a) s.nodes.push_back(F((rng() & 1 ? 1.0 : -1.0) * mod(rng)));
  for (int a = 0; a < pairs; ++a) s.pairs.push_back({2 * a, 2 * a + 1, F(amp(rng))});
  for (int k = 0; k < components; ++k) {
    s.d.emplace_back();
    for (int a = 0; a < 2 * pairs; ++a) s.d.back().push_back(F(amp(rng)));
  }
  s.times = {time(rng), time(rng)};
  return s;
}

namespace detail {

template <typename F>
F power(const F& x, int k) {
  F r(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// e^{theta_a}; exact fields only support the origin, where it is 1.
template <typename F>
F phase(const SolitonSpec<F>& s, std::size_t a) {
  if constexpr (is_exact_v<F>) {
    for (double t : s.times)
      if (t != 0.0) throw std::invalid_argument("exact soliton data only at t = 0");
    return F(1);
  } else {
    double theta = 0.0;
    for (std::size_t n = 0; n < s.times.size(); ++n) theta += s.times[n] * static_cast<double>(power(s.nodes[a], static_cast<int>(n + 1)));
    return std::exp(theta);
  }
}

template <typename F>
bool reciprocal_only(const SolitonSpec<F>& s) {
  if (!s.d.empty()) return false;
  for (const auto& p : s.pairs)
    if (s.nodes.at(p.a) * s.nodes.at(p.b) != F(1)) return false;
  return true;
}

}  // namespace detail

// Moments at the flow times stored in the data. Reciprocal-pair data is tagged laurent; the
// tag is a claim the validator can check (with a tolerance in float mode).
template <typename F>
MomentSystem<F> soliton_system(const SolitonSpec<F>& s, int max_index) {
  const bool toeplitz = detail::reciprocal_only(s);
  MomentSystem<F> sys(max_index, toeplitz ? 1 : static_cast<int>(s.d.size()),
                      toeplitz ? Constraint::laurent : Constraint::none);
  std::vector<F> w;
  for (std::size_t a = 0; a < s.nodes.size(); ++a) w.push_back(detail::phase(s, a));
  std::vector<std::vector<F>> pw(s.nodes.size());
  for (std::size_t a = 0; a < s.nodes.size(); ++a)
    for (int i = 0; i <= max_index; ++i) pw[a].push_back(detail::power(s.nodes[a], i));
  for (int i = 0; i <= max_index; ++i)
    for (int j = i + 1; j <= max_index; ++j) {
      F acc(0);
      for (const auto& p : s.pairs) acc += p.c * (pw[p.a][i] * pw[p.b][j] - pw[p.b][i] * pw[p.a][j]) * w[p.a] * w[p.b];
      sys.set_mu(i, j, acc);
    }
  for (std::size_t k = 0; k < s.d.size(); ++k)
    for (int j = 0; j <= max_index; ++j) {
      F acc(0);
      for (std::size_t a = 0; a < s.nodes.size(); ++a) acc += s.d[k].at(a) * pw[a][j] * w[a];
      sys.set_beta(static_cast<int>(k + 1), j, acc);
    }
  return sys;
}

}  // namespace pfsop
