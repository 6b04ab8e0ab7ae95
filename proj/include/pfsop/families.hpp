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

// Skew-orthogonal (P) and partial-skew-orthogonal (Q) polynomial families,
// the skew inner product and closed forms at z = 0.

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfsop/generators.hpp"
#include "pfsop/indexed.hpp"

namespace pfsop {

class VanishingNormalizer : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <typename R>
R checked_inverse(const R& tau, const std::string& what) {
  if (!ring_traits<R>::is_unit(tau)) throw VanishingNormalizer("vanishing " + what);
  return inverse_of(tau);
}

template <typename F, typename R>
Poly<R> normalized(const PfaffianContext<F, R>& ctx, const Labels& ls, int m, const R& tau, const std::string& what) {
  return ctx.pf_z(ls).shifted(-m).scaled(checked_inverse(tau, what));
}

}  // namespace detail

// P_n^{(m)}. P_1 = z by convention (the defining list degenerates).
template <typename F, typename R>
Poly<R> sop(const PfaffianContext<F, R>& ctx, int n, int m) {
  if (n < 0) return Poly<R>(ctx.zero());
  const int h = n / 2;
  const std::string what = "tau_" + std::to_string(2 * h) + "^(" + std::to_string(m) + ")";
  if (n % 2 == 0) return detail::normalized(ctx, range(m, m + n) + Label::z(), m, ctx.tau(n, m), what);
  if (h == 0) return Poly<R>::monomial(ctx.zero(), 1, ctx.one());
  Labels ls = range(m, m + 2 * h - 1) + Label::idx(m + 2 * h + 1) + Label::z();
  return detail::normalized(ctx, ls, m, ctx.tau(2 * h, m), what);
}

// Q_n^{(m)}, odd orders use component k (or its conjugate).
template <typename F, typename R>
Poly<R> psop(const PfaffianContext<F, R>& ctx, int n, int m, int k = 1, bool bar = false) {
  if (n < 0) return Poly<R>(ctx.zero());
  if (n % 2 == 0) return sop(ctx, n, m);
  Labels ls = (bar ? Label::dbar(k) : Label::d(k)) + range(m, m + n) + Label::z();
  return detail::normalized(ctx, ls, m, ctx.tau(n, m, k, bar),
                            "tau_" + std::to_string(n) + "," + std::to_string(k) + "^(" + std::to_string(m) + ")");
}

// <z^s f, z^s g> extended bilinearly from <z^i, z^j> = mu_{i,j}.
template <typename F>
F skew_inner(const MomentSystem<F>& sys, const Poly<F>& f, const Poly<F>& g, int shift = 0) {
  F acc(0);
  for (std::size_t i = 0; i < f.length(); ++i) {
    if (is_zero(f[i])) continue;
    for (std::size_t j = 0; j < g.length(); ++j) {
      if (is_zero(g[j])) continue;
      acc += f[i] * g[j] * sys.mu(static_cast<int>(i) + shift, static_cast<int>(j) + shift);
    }
  }
  return acc;
}

// Closed forms P_{2h}(0) = tau_{2h}^{(m+1)}/tau_{2h}^{(m)} and
// P_{2h+1}(0) = Pf(m+1..m+2h-1, m+2h+1)/tau_{2h}^{(m)}.
template <typename F, typename R>
R sop_at_zero(const PfaffianContext<F, R>& ctx, int n, int m) {
  const int h = n / 2;
  R inv = detail::checked_inverse(ctx.tau(2 * h, m), "tau_" + std::to_string(2 * h));
  if (n % 2 == 0) return ctx.tau(n, m + 1) * inv;
  if (h == 0) return ctx.zero();
  return ctx.pf(range(m + 1, m + 2 * h - 1) + Label::idx(m + 2 * h + 1)) * inv;
}

// Every tau_n^{(m)} with 0 <= n <= n_max, 0 <= m <= m_max (odd orders for
// every component) that vanishes.
struct ExistenceReport {
  std::vector<std::string> vanishing;
  bool ok() const { return vanishing.empty(); }
};

template <typename F>
ExistenceReport existence(const MomentSystem<F>& sys, int n_max, int m_max, bool odd = true) {
  PfaffianContext<F> ctx(sys);
  ExistenceReport rep;
  for (int m = 0; m <= m_max; ++m)
    for (int n = 0; n <= n_max; ++n) {
      if (n % 2 == 0) {
        if (is_zero(ctx.tau(n, m))) rep.vanishing.push_back("tau_" + std::to_string(n) + "^(" + std::to_string(m) + ")");
      } else if (odd) {
        for (int k = 1; k <= sys.components(); ++k) {
          if (is_zero(ctx.tau(n, m, k)))
            rep.vanishing.push_back("tau_" + std::to_string(n) + "," + std::to_string(k) + "^(" + std::to_string(m) + ")");
          if (sys.has_conjugate() && is_zero(ctx.tau(n, m, k, true)))
            rep.vanishing.push_back("taubar_" + std::to_string(n) + "," + std::to_string(k) + "^(" + std::to_string(m) + ")");
        }
      }
    }
  return rep;
}

// Draw systems from successive seeds until `accept` holds. Returns the
// system and the number of rejected draws.
template <typename Sys>
struct Sampled {
  Sys system;
  std::uint64_t seed = 0;
  int rejected = 0;
};

inline std::uint64_t derived_seed(std::uint64_t seed, int attempt) {
  return attempt == 0 ? seed : seed * 1000003ULL + static_cast<std::uint64_t>(attempt) * 7919ULL;
}

template <typename Gen, typename Accept>
auto sample_until(GenParams p, Gen gen, Accept accept, int max_attempts = 32)
    -> Sampled<decltype(gen(p))> {
  const std::uint64_t base = p.seed;
  for (int a = 0; a < max_attempts; ++a) {
    p.seed = derived_seed(base, a);
    auto sys = gen(p);
    if (accept(sys)) return {std::move(sys), p.seed, a};
  }
  throw std::runtime_error("no admissible system in " + std::to_string(max_attempts) + " draws");
}

// Resample until every tau below the given ceilings is nonzero.
inline Sampled<MomentSystem<Rational>> sample_admissible(const GenParams& p, int n_max, int m_max) {
  return sample_until(p, [](const GenParams& q) { return generate(q); },
                      [&](const MomentSystem<Rational>& s) { return existence(s, n_max, m_max).ok(); });
}
inline Sampled<MomentSystem<GaussianRational>> sample_admissible_complex(const GenParams& p, int n_max, int m_max) {
  return sample_until(p, [](const GenParams& q) { return generate_complex(q); },
                      [&](const MomentSystem<GaussianRational>& s) { return existence(s, n_max, m_max).ok(); });
}

}  // namespace pfsop
