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

// Schur polynomials, Schur operators acting on jets, Hirota derivatives
// and the catalog of bilinear identities among tau functions.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfsop/indexed.hpp"
#include "pfsop/linalg.hpp"

namespace pfsop {

// Coefficient of z^k in exp(sum_l t_l z^l); t[0] holds t_1.
// Uses k s_k = sum_{l=1}^k l t_l s_{k-l}.
template <typename F>
F schur(int k, const std::vector<F>& t) {
  if (k < 0) return F(0);
  std::vector<F> s(static_cast<std::size_t>(k) + 1, F(0));
  s[0] = F(1);
  for (int j = 1; j <= k; ++j) {
    F acc(0);
    for (int l = 1; l <= j; ++l) {
      if (static_cast<std::size_t>(l) > t.size()) break;
      acc += F(l) * t[l - 1] * s[j - l];
    }
    s[j] = acc * from_rational<F>(Rational(1, j));
  }
  return s[k];
}

// s_k(sign * d~) applied to a jet and read at the base point, where
// d~ = (d_1, d_2/2, d_3/3, ...). With coefficients stored as d^a/a!, this
// is sum over monomials of weight k of c_a prod_l (sign/l)^{a_l}.
template <typename F>
F schur_d(const Jet<F>& j, int k, int sign = -1) {
  if (k < 0) return F(0);
  if (k == 0) return j.base();
  const JetShape& sh = *j.shape();
  if (sh.ceiling() < k) throw std::out_of_range("jet truncation too low for s_" + std::to_string(k));
  for (int l = 1; l <= k; ++l) {
    auto d = sh.direction_of(l);
    if (!d || sh.cap(*d) < k / l) throw std::out_of_range("jet lacks the t_" + std::to_string(l) + " direction");
  }
  F acc(0);
  for (std::size_t i = 0; i < sh.size(); ++i) {
    if (sh.weight(i) != k || is_zero(j.coeff(i))) continue;
    Rational w(1);
    const auto& a = sh.monomial(i);
    for (std::size_t d = 0; d < a.size(); ++d)
      for (int e = 0; e < a[d]; ++e) w *= Rational(sign, sh.flow(d));
    acc += j.coeff(i) * from_rational<F>(w);
  }
  return acc;
}

// sum |c_a prod_l (1/l)^{a_l}| over the same monomials: what schur_d would
// return if nothing cancelled. Floating residuals are judged against it.
template <typename F>
double schur_d_bound(const Jet<F>& j, int k) {
  if (k < 0) return 0.0;
  if (k == 0) return magnitude(j.base());
  const JetShape& sh = *j.shape();
  double acc = 0.0;
  for (std::size_t i = 0; i < sh.size(); ++i) {
    if (sh.weight(i) != k) continue;
    double w = 1.0;
    const auto& a = sh.monomial(i);
    for (std::size_t d = 0; d < a.size(); ++d)
      for (int e = 0; e < a[d]; ++e) w /= sh.flow(d);
    acc += w * magnitude(j.coeff(i));
  }
  return acc;
}

// D_1^p D_2^q f.g = sum C(p,a) C(q,b) (-1)^{p-a+q-b} f^{(a,b)} g^{(p-a,q-b)}.
template <typename F>
F hirota(int p, int q, const Jet<F>& f, const Jet<F>& g) {
  F acc(0);
  for (int a = 0; a <= p; ++a)
    for (int b = 0; b <= q; ++b) {
      long c = detail::binomial(p, a) * detail::binomial(q, b);
      if ((p - a + q - b) % 2) c = -c;
      acc += F(c) * f.extract(a, b) * g.extract(p - a, q - b);
    }
  return acc;
}

// ---------------------------------------------------------------------------
// Identity catalog

enum class IdentityId {
  DKP,
  PFAFF_FIRST,
  TODA_1D,
  TODA_BILINEAR,
  BKP_LARGE_1,
  BKP_LARGE_2,
  GLV1,
  GLV2,
  GLV,
  LV,
  BTODA,
  BTODA_BACKLUND,
  MKDV,
  EVOD,
  CMKDV,
  VNLS,
};

struct IdentityParams {
  int n = 0;
  int m = 0;
  int l = 0;     // hierarchy member
  int k = 1;     // component
  int part = 0;  // MKDV: 0 bilinear equation, 1 quadratic constraint
  bool bar = false;
};

// tau_n^{(m+dm)}, optionally for component k or its conjugate.
struct TauRef {
  int n = 0;
  int dm = 0;
  int k = 1;
  bool bar = false;
};

// s_schur(-d~) d_1^{d1} tau.
struct Factor {
  TauRef tau;
  int schur = 0;
  int d1 = 0;
};

// coeff * D_1^p D_2^q f.g (a plain product when p = q = 0).
struct Term {
  int coeff = 1;
  int p = 0, q = 0;
  Factor f, g;
};

struct IdentityInfo {
  IdentityId id;
  const char* name;
  const char* tag;
  // Constraint tags under which the identity is claimed; empty means any.
  std::vector<Constraint> requires_tag;
};

inline const std::vector<IdentityInfo>& identity_catalog() {
  using C = Constraint;
  static const std::vector<IdentityInfo> cat = {
      {IdentityId::DKP, "DKP", "dkp", {}},
      {IdentityId::PFAFF_FIRST, "PFAFF_FIRST", "dkp-first", {}},
      {IdentityId::TODA_1D, "TODA_1D", "1dtoda", {C::laurent}},
      {IdentityId::TODA_BILINEAR, "TODA_BILINEAR", "toda-bilinear", {C::laurent}},
      {IdentityId::BKP_LARGE_1, "BKP_LARGE_1", "ih-1", {}},
      {IdentityId::BKP_LARGE_2, "BKP_LARGE_2", "ih-2", {}},
      {IdentityId::GLV1, "GLV1", "glv1", {}},
      {IdentityId::GLV2, "GLV2", "glv2", {}},
      {IdentityId::GLV, "GLV", "glv", {}},
      {IdentityId::LV, "LV", "lv", {C::laurent}},
      {IdentityId::BTODA, "BTODA", "btoda", {C::rank2}},
      {IdentityId::BTODA_BACKLUND, "BTODA_BACKLUND", "btoda-backlund", {C::rank2}},
      {IdentityId::MKDV, "MKDV", "mkdv", {C::rank1skew}},
      {IdentityId::EVOD, "EVOD", "evod", {C::rank1skew}},
      {IdentityId::CMKDV, "CMKDV", "cmkdv-constraint", {C::rank1skew_multi}},
      {IdentityId::VNLS, "VNLS", "vnls-constraint", {C::rank1skew_complex}},
  };
  return cat;
}

inline const IdentityInfo& identity_info(IdentityId id) {
  for (const auto& i : identity_catalog())
    if (i.id == id) return i;
  throw std::logic_error("identity missing from catalog");
}

inline IdentityId parse_identity(const std::string& s) {
  for (const auto& i : identity_catalog())
    if (s == i.name) return i.id;
  throw std::invalid_argument("unknown identity '" + s + "'");
}

class ConstraintMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_constraint(const IdentityInfo& info, Constraint have) {
  if (info.requires_tag.empty()) return;
  if (std::find(info.requires_tag.begin(), info.requires_tag.end(), have) != info.requires_tag.end()) return;
  throw ConstraintMismatch(std::string(info.name) + " needs a " + constraint_name(info.requires_tag.front()) +
                           " system, got " + constraint_name(have));
}

namespace detail {

inline Factor fac(int n, int dm, int schur = 0, int d1 = 0, int k = 1, bool bar = false) {
  return Factor{TauRef{n, dm, k, bar}, schur, d1};
}

inline std::vector<Term> dkp_terms(int n, int l) {
  // a = tau_{2n}^{(m+1)}, b = tau_{2n}^{(m)}
  return {
      {1, 0, 0, fac(2 * n, 1), fac(2 * n, 0, 2 * n + 1 - l)},
      {1, 0, 0, fac(2 * n, 1), fac(2 * n, 0, 2 * n - l, 1)},
      {-1, 0, 0, fac(2 * n, 1, 0, 1), fac(2 * n, 0, 2 * n - l)},
      {-1, 0, 0, fac(2 * n, 0), fac(2 * n, 1, 2 * n + 1 - l)},
      {1, 0, 0, fac(2 * n + 2, 0), fac(2 * n - 2, 1, 2 * n - 1 - l)},
  };
}

// Odd taus in the large-BKP rows may be replaced by their conjugates.
inline std::vector<Term> bkp1_terms(int n, int l, int k, bool bar) {
  return {
      {1, 0, 0, fac(2 * n, 1), fac(2 * n + 1, 0, 2 * n + 1 - l, 0, k, bar)},
      {1, 0, 0, fac(2 * n + 1, 1, 0, 0, k, bar), fac(2 * n, 0, 2 * n - l)},
      {-1, 0, 0, fac(2 * n + 1, 0, 0, 0, k, bar), fac(2 * n, 1, 2 * n + 1 - l)},
      {-1, 0, 0, fac(2 * n + 2, 0), fac(2 * n - 1, 1, 2 * n - l, 0, k, bar)},
  };
}

inline std::vector<Term> bkp2_terms(int n, int l, int k, bool bar) {
  return {
      {1, 0, 0, fac(2 * n + 1, 1, 0, 0, k, bar), fac(2 * n + 2, 0, 2 * n + 2 - l)},
      {1, 0, 0, fac(2 * n + 2, 1), fac(2 * n + 1, 0, 2 * n + 1 - l, 0, k, bar)},
      {-1, 0, 0, fac(2 * n + 2, 0), fac(2 * n + 1, 1, 2 * n + 2 - l, 0, k, bar)},
      {-1, 0, 0, fac(2 * n + 3, 0, 0, 0, k, bar), fac(2 * n, 1, 2 * n + 1 - l)},
  };
}

// mKdV variables: f_{2j} = tau_{2j}^{(m)}, f_{2j+1} = tau_{2j}^{(m+1)},
// g_{2j+1} = tau_{2j+1}^{(m)}, g_{2j+2} = tau_{2j+1}^{(m+1)}.
inline Factor mkdv_f(int j) {
  if (j < 0) return fac(-2, 0);
  return j % 2 == 0 ? fac(j, 0) : fac(j - 1, 1);
}
inline Factor mkdv_g(int j) {
  if (j <= 0) return fac(-1, 0);
  return j % 2 == 1 ? fac(j, 0) : fac(j - 1, 1);
}

}  // namespace detail

// Terms whose sum vanishes when the identity holds.
inline std::vector<Term> identity_terms(IdentityId id, const IdentityParams& P, int components = 1) {
  using detail::fac;
  const int n = P.n, l = P.l, k = P.k;
  switch (id) {
    case IdentityId::DKP:
      return detail::dkp_terms(n, l);
    case IdentityId::PFAFF_FIRST:
      // (D_2 + D_1^2) tau_{2n}^{(m)} . tau_{2n}^{(m+1)} = 2 tau_{2n+2}^{(m)} tau_{2n-2}^{(m+1)}
      return {{1, 0, 1, fac(2 * n, 0), fac(2 * n, 1)},
              {1, 2, 0, fac(2 * n, 0), fac(2 * n, 1)},
              {-2, 0, 0, fac(2 * n + 2, 0), fac(2 * n - 2, 1)}};
    case IdentityId::TODA_1D:
      return {{1, 1, 0, fac(2 * n, 0), fac(2 * n, 0, 2 * n - l)},
              {-1, 0, 0, fac(2 * n + 2, 0), fac(2 * n - 2, 0, 2 * n - 1 - l)}};
    case IdentityId::TODA_BILINEAR:
      return {{1, 2, 0, fac(2 * n, 0), fac(2 * n, 0)}, {-2, 0, 0, fac(2 * n - 2, 0), fac(2 * n + 2, 0)}};
    case IdentityId::BKP_LARGE_1:
      return detail::bkp1_terms(n, l, k, P.bar);
    case IdentityId::BKP_LARGE_2:
      return detail::bkp2_terms(n, l, k, P.bar);
    case IdentityId::GLV1:
      return {{1, 0, 0, fac(2 * n + 2, 0), fac(2 * n - 1, 1, 0, 0, k)},
              {-1, 1, 0, fac(2 * n, 1), fac(2 * n + 1, 0, 0, 0, k)},
              {-1, 0, 0, fac(2 * n + 1, 1, 0, 0, k), fac(2 * n, 0)}};
    case IdentityId::GLV2:
      return {{1, 0, 0, fac(2 * n + 3, 0, 0, 0, k), fac(2 * n, 1)},
              {-1, 1, 0, fac(2 * n + 1, 1, 0, 0, k), fac(2 * n + 2, 0)},
              {-1, 0, 0, fac(2 * n + 2, 1), fac(2 * n + 1, 0, 0, 0, k)}};
    case IdentityId::GLV:
      return {{1, 0, 0, fac(n + 2, 0, 0, 0, k), fac(n - 1, 1, 0, 0, k)},
              {-1, 1, 0, fac(n, 1, 0, 0, k), fac(n + 1, 0, 0, 0, k)},
              {-1, 0, 0, fac(n, 0, 0, 0, k), fac(n + 1, 1, 0, 0, k)}};
    case IdentityId::LV:
      return {{1, 0, 0, fac(n - 1, 0), fac(n + 2, 0)},
              {-1, 1, 0, fac(n, 0), fac(n + 1, 0)},
              {-1, 0, 0, fac(n, 0), fac(n + 1, 0)}};
    case IdentityId::BTODA:
      // D_1^2 tau_n . tau_n + 2 D_1 tau_{n+1} . tau_{n-1} = 0
      return {{1, 2, 0, fac(n, 0), fac(n, 0)}, {2, 1, 0, fac(n + 1, 0), fac(n - 1, 0)}};
    case IdentityId::BTODA_BACKLUND:
      return {{1, 1, 0, fac(n, 0), fac(n, 1)}, {-1, 1, 0, fac(n + 1, 0), fac(n - 1, 1)}};
    case IdentityId::MKDV:
      if (P.part == 0)
        return {{1, 1, 0, detail::mkdv_g(n), detail::mkdv_f(n)},
                {-1, 0, 0, detail::mkdv_g(n + 1), detail::mkdv_f(n - 1)},
                {1, 0, 0, detail::mkdv_g(n - 1), detail::mkdv_f(n + 1)}};
      return {{1, 0, 0, detail::mkdv_f(n + 1), detail::mkdv_f(n - 1)},
              {-1, 0, 0, detail::mkdv_g(n), detail::mkdv_g(n)}};
    case IdentityId::EVOD:
      return {{1, 0, 0, fac(2 * n, 0), fac(2 * n + 2, 0)}, {-1, 0, 0, fac(2 * n + 1, 0), fac(2 * n + 1, 0)}};
    case IdentityId::CMKDV:
    case IdentityId::VNLS: {
      const int dm = 0;  // the shift comes from P.m
      std::vector<Term> t{{1, 0, 0, fac(2 * n, dm), fac(2 * n + 2, dm)}};
      for (int a = 1; a <= components; ++a)
        for (int b = 1; b <= components; ++b)
          t.push_back({-1, 0, 0, fac(2 * n + 1, dm, 0, 0, a), fac(2 * n + 1, dm, 0, 0, b, id == IdentityId::VNLS)});
      return t;
    }
  }
  throw std::logic_error("unhandled identity");
}

// Jet weight needed to evaluate every factor of a term list.
inline int required_weight(const std::vector<Term>& terms) {
  int w = 1;
  for (const auto& t : terms)
    for (const Factor* f : {&t.f, &t.g}) w = std::max(w, f->schur + f->d1 + t.p + 2 * t.q);
  return w;
}

// Tau values lifted to weighted jets, one Pfaffian context per weight.
template <typename F>
class TauJets {
 public:
  // Requests below `floor_weight` are served from the floor context, so a
  // sweep over many small weights shares one set of Pfaffians.
  explicit TauJets(const MomentSystem<F>& sys, int floor_weight = 0) : sys_(&sys), floor_(floor_weight) {}

  const PfaffianContext<F, Jet<F>>& context(int w) const {
    w = std::max(w, floor_);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ctx_.find(w);
    if (it == ctx_.end())
      it = ctx_.emplace(w, std::make_unique<PfaffianContext<F, Jet<F>>>(*sys_, JetShape::weighted(w))).first;
    return *it->second;
  }

  Jet<F> tau(const TauRef& r, int m, int w) const { return context(w).tau(r.n, m + r.dm, r.k, r.bar); }

  const MomentSystem<F>& system() const { return *sys_; }

 private:
  const MomentSystem<F>* sys_;
  int floor_ = 0;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<PfaffianContext<F, Jet<F>>>> ctx_;
};

namespace detail {

// s_schur(-d~) d_1^{d1 + a} d_2^{b} tau at the base point.
template <typename F>
F factor_value(const Jet<F>& tau, const Factor& f, int a, int b) {
  if (f.schur < 0) return F(0);
  Jet<F> j = tau;
  for (int i = 0; i < f.d1 + a; ++i) j = j.derivative(1);
  for (int i = 0; i < b; ++i) j = j.derivative(2);
  return schur_d(j, f.schur, -1);
}

template <typename F>
double factor_bound(const Jet<F>& tau, const Factor& f, int a, int b) {
  if (f.schur < 0) return 0.0;
  Jet<F> j = tau;
  for (int i = 0; i < f.d1 + a; ++i) j = j.derivative(1);
  for (int i = 0; i < b; ++i) j = j.derivative(2);
  return schur_d_bound(j, f.schur);
}

}  // namespace detail

// Sum of the term values. `scale`, if given, accumulates the no-cancellation
// bound of that sum (every binomial, Schur weight and jet coefficient taken
// in absolute value), the yardstick for a floating residual.
template <typename F>
F evaluate_terms(const TauJets<F>& jets, const std::vector<Term>& terms, int m, double* scale = nullptr) {
  const int w = required_weight(terms);
  F acc(0);
  for (const auto& t : terms) {
    if (t.f.schur < 0 || t.g.schur < 0 || t.f.tau.n < 0 || t.g.tau.n < 0) continue;  // s_{<0} = 0, tau_{-1} = tau_{-2} = 0
    Jet<F> fj = jets.tau(t.f.tau, m, w), gj = jets.tau(t.g.tau, m, w);
    F s(0);
    for (int a = 0; a <= t.p; ++a)
      for (int b = 0; b <= t.q; ++b) {
        long c = detail::binomial(t.p, a) * detail::binomial(t.q, b);
        if ((t.p - a + t.q - b) % 2) c = -c;
        s += F(c) * detail::factor_value(fj, t.f, a, b) * detail::factor_value(gj, t.g, t.p - a, t.q - b);
        if (scale)
          *scale += std::abs(static_cast<double>(c) * t.coeff) * detail::factor_bound(fj, t.f, a, b) *
                    detail::factor_bound(gj, t.g, t.p - a, t.q - b);
      }
    acc += F(t.coeff) * s;
  }
  return acc;
}

template <typename F>
F identity_residual(const TauJets<F>& jets, IdentityId id, const IdentityParams& p, bool check_tag = true,
                    double* scale = nullptr) {
  if (check_tag) require_constraint(identity_info(id), jets.system().constraint());
  if (p.k < 1 || p.k > jets.system().components()) throw std::out_of_range("no such component");
  return evaluate_terms(jets, identity_terms(id, p, jets.system().components()), p.m, scale);
}

template <typename F>
F identity_residual(const MomentSystem<F>& sys, IdentityId id, const IdentityParams& p) {
  TauJets<F> jets(sys);
  return identity_residual(jets, id, p);
}

// Parameter grid enumerated by the verification suites.
inline std::vector<IdentityParams> identity_instances(IdentityId id, int n_max, int m_max, int components) {
  std::vector<IdentityParams> out;
  for (int m = 0; m <= m_max; ++m)
    for (int n = 0; n <= n_max; ++n) {
      IdentityParams p;
      p.n = n;
      p.m = m;
      switch (id) {
        case IdentityId::DKP:
          for (int l = 0; l <= 2 * n - 1; ++l) {
            p.l = l;
            out.push_back(p);
          }
          break;
        case IdentityId::TODA_1D:
          if (m > 0) break;
          for (int l = 0; l <= 2 * n - 1; ++l) {
            p.l = l;
            out.push_back(p);
          }
          break;
        case IdentityId::BKP_LARGE_1:
        case IdentityId::BKP_LARGE_2:
          for (int k = 1; k <= components; ++k)
            for (int l = 0; l <= 2 * n + (id == IdentityId::BKP_LARGE_2 ? 1 : 0); ++l) {
              p.k = k;
              p.l = l;
              out.push_back(p);
            }
          break;
        case IdentityId::GLV1:
        case IdentityId::GLV2:
        case IdentityId::GLV:
          for (int k = 1; k <= components; ++k) {
            p.k = k;
            out.push_back(p);
          }
          break;
        case IdentityId::TODA_BILINEAR:
        case IdentityId::LV:
          if (m == 0) out.push_back(p);
          break;
        case IdentityId::MKDV:
          for (int part = 0; part <= 1; ++part) {
            p.part = part;
            out.push_back(p);
          }
          break;
        default:
          out.push_back(p);
      }
    }
  return out;
}

// Hankel form of a Toeplitz Pfaffian: det(x_ij)_{i,j<n} with
// x_ij = mu_{|i-j|+1} + mu_{|i-j|+3} + ... + mu_{i+j+1}, mu_k = mu_{0,k}.
template <typename F>
F stembridge_residual(const MomentSystem<F>& sys, int n) {
  if (sys.constraint() != Constraint::laurent) throw ConstraintMismatch("Hankel correspondence needs a laurent system");
  std::vector<std::vector<F>> x(n, std::vector<F>(n, F(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = std::abs(i - j) + 1; k <= i + j + 1; k += 2) x[i][j] += sys.mu(0, k);
  PfaffianContext<F> ctx(sys);
  return determinant(x) - ctx.tau(2 * n, 0);
}

}  // namespace pfsop
