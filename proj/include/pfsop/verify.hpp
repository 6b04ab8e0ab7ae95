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

// Batch verification: a registry of residual suites, seeded sampling of
// admissible systems, and the JSON report consumed by the command line.

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <thread>

#include "pfsop/christoffel.hpp"
#include "pfsop/io.hpp"
#include "pfsop/recurrences.hpp"
#include "pfsop/soliton.hpp"

namespace pfsop {

// The shapes of parameter space a suite walks.
struct Grid {
  int n_max = 3;
  int m_max = 2;
  int components = 1;
};

// Optional single-value restrictions (--n, --m, --l).
struct Filter {
  std::optional<int> n, m, l;
  bool admits(const IdentityParams& p) const {
    return (!n || *n == p.n) && (!m || *m == p.m) && (!l || *l == p.l);
  }
  bool empty() const { return !n && !m && !l; }
};

// One evaluation: residual values that must vanish, and for floating runs
// the magnitude they are judged against.
template <typename F>
struct Outcome {
  std::vector<F> values;
  double scale = 0;
};

template <typename F>
struct Workspace {
  Workspace(const MomentSystem<F>& s, int floor_weight) : sys(s), jets(s, floor_weight) {}
  const MomentSystem<F>& sys;
  TauJets<F> jets;
};

template <typename F>
struct Suite {
  std::string name;
  std::string tag;
  std::vector<Constraint> kinds;  // empty: every kind
  std::function<std::vector<IdentityParams>(const Grid&)> instances;
  std::function<Outcome<F>(Workspace<F>&, const IdentityParams&)> eval;

  bool runs_on(Constraint c) const { return kinds.empty() || std::find(kinds.begin(), kinds.end(), c) != kinds.end(); }
};

namespace detail {

template <typename F>
void append(std::vector<F>& v, const Poly<F>& p) {
  for (int i = 0; i <= p.degree(); ++i) v.push_back(p[static_cast<std::size_t>(i)]);
}
template <typename F>
void append(std::vector<F>& v, const std::pair<Poly<F>, Poly<F>>& p) {
  append(v, p.first);
  append(v, p.second);
}
template <typename F>
void append(std::vector<F>& v, const std::vector<Defect<F>>& d) {
  for (const auto& x : d) v.push_back(x.value);
}
template <typename F>
void append(std::vector<F>& v, const std::vector<Poly<F>>& ps) {
  for (const auto& p : ps) append(v, p);
}
template <typename F>
void append(std::vector<F>& v, const BlockResidual<F>& b) {
  const std::size_t n = b.full.size();
  for (std::size_t i = 1; i + 3 <= n; ++i)
    for (std::size_t j = 1; j + 3 <= n; ++j) v.push_back(b.full(i, j));
}
template <typename F>
void append(std::vector<F>& v, const F& x) {
  v.push_back(x);
}

template <typename F, typename T>
Outcome<F> outcome(const T& r) {
  Outcome<F> o;
  append(o.values, r);
  return o;
}

// n in [lo, n_hi], m in [0, m_hi]; `fill` may fan out further.
inline std::vector<IdentityParams> nm_grid(int lo, int n_hi, int m_hi, int parts = 1) {
  std::vector<IdentityParams> out;
  for (int m = 0; m <= m_hi; ++m)
    for (int n = lo; n <= n_hi; ++n)
      for (int part = 0; part < parts; ++part) {
        IdentityParams p;
        p.n = n;
        p.m = m;
        p.part = part;
        out.push_back(p);
      }
  return out;
}

// Truncation sizes for the Lax checks, carried in the l slot.
inline std::vector<IdentityParams> lax_grid(int m_hi) {
  std::vector<IdentityParams> out;
  for (int m = 0; m <= std::min(m_hi, 1); ++m)
    for (int N : {6, 8, 10}) {
      IdentityParams p;
      p.m = m;
      p.l = N;
      out.push_back(p);
    }
  return out;
}

template <typename F>
Suite<F> catalog_suite(const IdentityInfo& info) {
  const IdentityId id = info.id;
  // Tag-free identities hold on every system. The batch runs them on the
  // unconstrained kind, plus the multi-component one when they carry a
  // component index; constrained kinds are special cases and would repeat
  // the work at several times the cost (Gaussian arithmetic especially).
  std::vector<Constraint> kinds = info.requires_tag;
  if (kinds.empty()) {
    kinds = {Constraint::none};
    const bool per_component = id == IdentityId::BKP_LARGE_1 || id == IdentityId::BKP_LARGE_2 ||
                               id == IdentityId::GLV1 || id == IdentityId::GLV2 || id == IdentityId::GLV;
    if (per_component) kinds.push_back(Constraint::rank1skew_multi);
  }
  return {info.name, info.tag, std::move(kinds),
          [id](const Grid& g) { return identity_instances(id, g.n_max, g.m_max, g.components); },
          [id](Workspace<F>& w, const IdentityParams& p) {
            Outcome<F> o;
            o.values.push_back(identity_residual(w.jets, id, p, true, &o.scale));
            return o;
          }};
}

template <typename F>
Outcome<F> constraint_outcome(const MomentSystem<F>& sys) {
  Outcome<F> o;
  for (const auto& v : validate(sys).violations) o.values.push_back(v.residual);
  for (int i = 0; i <= sys.max_index(); ++i)
    for (int j = 0; j <= sys.max_index(); ++j) o.scale = std::max(o.scale, magnitude(sys.mu(i, j)));
  return o;
}

// Suites beyond the bilinear catalog; these run in exact rational mode.
inline void rational_suites(std::vector<Suite<Rational>>& out) {
  using F = Rational;
  using C = Constraint;
  using W = Workspace<F>;
  using P = IdentityParams;
  const std::vector<C> generic = {C::none};

  out.push_back({"SOP_ORTHO", "sop", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(sop_relation_defects(w.sys, p.n, p.m)); }});
  out.push_back({"PSOP_ORTHO", "psop", generic,
                 [](const Grid& g) {
                   auto v = nm_grid(0, g.n_max, g.m_max);
                   std::vector<P> out;
                   for (auto p : v)
                     for (int k = 1; k <= g.components; ++k) {
                       p.k = k;
                       out.push_back(p);
                     }
                   return out;
                 },
                 [](W& w, const P& p) { return outcome<F>(psop_relation_defects(w.sys, p.n, p.m, p.k)); }});
  out.push_back({"ODD_DET", "det", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max, 2); },
                 [](W& w, const P& p) {
                   return outcome<F>(odd_condition_determinant(w.sys, p.n, p.m, p.part ? OddChoice::psop : OddChoice::sop));
                 }});
  out.push_back({"SOP_CT", "sop-ct", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(sop_transform_residual(w.sys, p.n, p.m)); }});
  out.push_back({"SOP_CT_RATIO", "sop-ct-d", generic,
                 [](const Grid& g) {
                   auto v = nm_grid(0, g.n_max, g.m_max);
                   v.erase(std::remove_if(v.begin(), v.end(), [](const P& p) { return p.m < 1; }), v.end());
                   return v;
                 },
                 [](W& w, const P& p) {
                   PfaffianContext<F> ctx(w.sys);
                   PfaffianContext<F, Jet<F>> jctx(w.sys, JetShape::box(1, 0));
                   return outcome<F>(F(sop_coeffs(ctx, jctx, p.n, p.m).D - sop_coeff_d_ratio(ctx, p.n, p.m)));
                 }});
  out.push_back({"PSOP_CT", "psop-ct", generic, [](const Grid& g) { return nm_grid(0, 2 * g.n_max + 1, g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(psop_transform_residual(w.sys, p.n, p.m)); }});
  out.push_back({"PSOP_MULTI_CT", "psop-ct12", generic,
                 [](const Grid& g) {
                   std::vector<P> out;
                   for (auto p : nm_grid(0, g.n_max, g.m_max))
                     for (int k = 1; k <= g.components; ++k) {
                       p.k = k;
                       out.push_back(p);
                     }
                   return out;
                 },
                 [](W& w, const P& p) { return outcome<F>(psop_multi_transform_residual(w.sys, p.n, p.m, p.k)); }});
  out.push_back({"DERIVATIVE", "prop-derivative", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(derivative_identity_residual(w.sys, p.n, p.m)); }});
  out.push_back({"SOP_SCHUR", "schur", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max); },
                 [](W& w, const P& p) {
                   return outcome<F>(schur_coefficient_defects(w.sys, p.n, p.m, SchurFamily::sop_even));
                 }});
  out.push_back({"PSOP_SCHUR", "psopschur", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max, 2); },
                 [](W& w, const P& p) {
                   return outcome<F>(schur_coefficient_defects(w.sys, p.n, p.m,
                                                               p.part ? SchurFamily::psop_odd : SchurFamily::psop_even));
                 }});
  out.push_back({"MIXED", "mixed", generic, [](const Grid& g) { return nm_grid(0, g.n_max + 1, g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(mixed_residual(w.sys, p.n, p.m)); }});
  out.push_back({"BKP_GLV_CROSS", "ih-glv", generic, [](const Grid& g) { return nm_grid(0, g.n_max, g.m_max, 2); },
                 [](W& w, const P& p) {
                   P big = p, small = p;
                   big.l = 2 * p.n + p.part;
                   small.l = 0;
                   const IdentityId a = p.part ? IdentityId::BKP_LARGE_2 : IdentityId::BKP_LARGE_1;
                   const IdentityId b = p.part ? IdentityId::GLV2 : IdentityId::GLV1;
                   return outcome<F>(F(identity_residual(w.jets, a, big) + identity_residual(w.jets, b, small)));
                 }});
  out.push_back({"LAX_COMPAT", "lax-compat", generic, [](const Grid& g) { return lax_grid(g.m_max); },
                 [](W& w, const P& p) {
                   return outcome<F>(lax_compat_residual(w.sys, p.m, static_cast<std::size_t>(p.l)));
                 }});
  out.push_back({"LAX_ROWS", "lax-rows", generic, [](const Grid& g) { return lax_grid(g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(lax_row_defects(w.sys, p.m, static_cast<std::size_t>(p.l))); }});

  const std::vector<C> laurent = {C::laurent};
  out.push_back({"STEMBRIDGE", "hankel", laurent, [](const Grid& g) { return nm_grid(1, g.n_max + 1, 0); },
                 [](W& w, const P& p) { return outcome<F>(stembridge_residual(w.sys, p.n)); }});
  out.push_back({"LAURENT_TODA_CT", "toda-ct", laurent, [](const Grid& g) { return nm_grid(0, g.n_max, 0); },
                 [](W& w, const P& p) { return outcome<F>(laurent_toda_residual(w.sys, p.n)); }});
  out.push_back({"LV_XI_ETA", "lv-xi-eta", laurent, [](const Grid& g) { return nm_grid(0, 2 * g.n_max, 0); },
                 [](W& w, const P& p) { return outcome<F>(laurent_lv_coeff_check(w.sys, p.n)); }});
  out.push_back({"DERIVATIVE2", "derivative2", laurent, [](const Grid& g) { return nm_grid(0, g.n_max, 0); },
                 [](W& w, const P& p) { return outcome<F>(second_derivative_residual(w.sys, p.n)); }});
  out.push_back({"LAURENT_EVOLUTION", "laurent-evo", laurent, [](const Grid& g) { return nm_grid(0, g.n_max, 0); },
                 [](W& w, const P& p) { return outcome<F>(laurent_evolution_residuals(w.sys, p.n)); }});
  out.push_back({"TODA_FLOW", "toda-flow", laurent, [](const Grid& g) { return nm_grid(1, g.n_max, 0); },
                 [](W& w, const P& p) {
                   auto r = toda_flow_residual(w.sys, p.n);
                   Outcome<F> o;
                   o.values = {r.first, r.second};
                   return o;
                 }});

  const std::vector<C> rank2 = {C::rank2};
  out.push_back({"DERPSOP", "derpsop", rank2, [](const Grid& g) { return nm_grid(0, g.n_max + 1, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(psop_derivative_residual(w.sys, p.n, p.m)); }});
  out.push_back({"EVO", "evo", rank2, [](const Grid& g) { return nm_grid(0, g.n_max + 1, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(evo_residual(w.sys, p.n, p.m)); }});
  out.push_back({"PSOPLAX1", "psoplax1", rank2, [](const Grid& g) { return nm_grid(0, g.n_max + 1, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(adjacent_evolution_residual(w.sys, p.n, p.m)); }});
  out.push_back({"PSOPLAX1_SPECTRAL", "psoplax1-b", rank2,
                 [](const Grid& g) { return nm_grid(1, g.n_max + 1, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(adjacent_spectral_residual(w.sys, p.n, p.m)); }});
  out.push_back({"RANK2_FORM1", "b1", rank2, [](const Grid& g) { return lax_grid(g.m_max); },
                 [](W& w, const P& p) {
                   return outcome<F>(rank2_first_form_residual(w.sys, p.m, static_cast<std::size_t>(p.l)));
                 }});
  out.push_back({"RANK2_FORM2", "b2", rank2, [](const Grid& g) { return lax_grid(g.m_max); },
                 [](W& w, const P& p) {
                   return outcome<F>(rank2_second_form_residual(w.sys, p.m, static_cast<std::size_t>(p.l)));
                 }});
  out.push_back({"RANK2_ROWS", "b-rows", rank2, [](const Grid& g) { return lax_grid(g.m_max); },
                 [](W& w, const P& p) { return outcome<F>(rank2_row_defects(w.sys, p.m, static_cast<std::size_t>(p.l))); }});

  const std::vector<C> skew = {C::rank1skew};
  out.push_back({"LAX1", "lax1", skew, [](const Grid& g) { return nm_grid(0, g.n_max, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(three_term_residual(w.sys, p.n, p.m)); }});
  out.push_back({"LAX2", "lax2", skew, [](const Grid& g) { return nm_grid(0, g.n_max, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(even_evolution_residual(w.sys, p.n, p.m)); }});
  out.push_back({"ODDSPECTRAL", "oddspectral", skew, [](const Grid& g) { return nm_grid(0, g.n_max, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(odd_spectral_residual(w.sys, p.n, p.m)); }});
  out.push_back({"LAX4", "lax4", skew, [](const Grid& g) { return nm_grid(0, g.n_max, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(odd_evolution_residual(w.sys, p.n, p.m)); }});
  out.push_back({"EVOD_K", "evod-k", skew, [](const Grid& g) { return nm_grid(0, g.n_max, std::min(g.m_max, 1)); },
                 [](W& w, const P& p) { return outcome<F>(k_parity_defect(w.sys, p.n, p.m)); }});
}

}  // namespace detail

// Every suite available over F: the bilinear catalog and the moment
// constraint for all fields, the polynomial and Lax suites for exact
// rationals only.
template <typename F>
std::vector<Suite<F>> suite_registry() {
  std::vector<Suite<F>> out;
  for (const auto& info : identity_catalog()) out.push_back(detail::catalog_suite<F>(info));
  if constexpr (std::is_same_v<F, Rational>) detail::rational_suites(out);
  out.push_back({"MOMENT_CONSTRAINT", "constraint", {}, [](const Grid&) { return std::vector<IdentityParams>{{}}; },
                 [](Workspace<F>& w, const IdentityParams&) { return detail::constraint_outcome(w.sys); }});
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

// Tau orders and shifts the registry can touch for given ceilings: the Lax
// checks reach tau_11 at m + 1 <= 2, the hierarchy suites tau_{2n+3}.
struct SampleBudget {
  int tau_order;
  int m_ceiling;
  int max_index;
};

inline SampleBudget sample_budget(int n_max, int m_max) {
  const int tau = std::max(2 * n_max + 3, 11);
  const int mc = std::max(m_max + 1, 2);
  // Schur coefficients up to s_6 ride on weight-6 jets.
  return {tau, mc, required_max_index((tau + 1) / 2, mc, 6, 1)};
}

// Every tau in the budget must be nonzero, and on rank2 systems so must the
// denominators of the rewritten coefficients A_n and Bt_n (n >= 1; A_0
// never enters, tau_0 = tau'_0 = 1).
template <typename F>
bool admissible(const MomentSystem<F>& sys, const SampleBudget& b) {
  if (!existence(sys, b.tau_order, b.m_ceiling).ok()) return false;
  if (sys.constraint() != Constraint::rank2) return true;
  try {
    LaxCoeffs<F> c(sys, 1);
    for (int m = 0; m < b.m_ceiling; ++m)
      for (int n = 1; n < b.tau_order; ++n) {
        (void)c.A(n, m);
        (void)c.Bt(n, m);
      }
  } catch (const VanishingNormalizer&) {
    return false;
  }
  return true;
}

inline GenParams gen_params(Constraint kind, std::uint64_t seed, int components, const SampleBudget& b) {
  GenParams p;
  p.kind = kind;
  p.seed = seed;
  p.components = components;
  p.max_index = b.max_index;
  return p;
}

inline Sampled<MomentSystem<Rational>> sample_rational(Constraint kind, std::uint64_t seed, int components, int n_max,
                                                       int m_max) {
  const SampleBudget b = sample_budget(n_max, m_max);
  return sample_until(gen_params(kind, seed, components, b), [](const GenParams& q) { return generate(q); },
                      [&](const MomentSystem<Rational>& s) { return admissible(s, b); });
}

inline Sampled<MomentSystem<GaussianRational>> sample_complex(std::uint64_t seed, int components, int n_max, int m_max) {
  const SampleBudget b = sample_budget(n_max, m_max);
  return sample_until(gen_params(Constraint::rank1skew_complex, seed, components, b),
                      [](const GenParams& q) { return generate_complex(q); },
                      [&](const MomentSystem<GaussianRational>& s) { return admissible(s, b); });
}

// Float mode works on soliton data at nonzero flow times, in quadruple
// precision: the moment blocks of few-exponential data are ill-conditioned
// (|tau_8| can sit 1e-10 below its Hadamard bound), and double or long
// double leave 1e-9 .. 1e-8 of elimination error in the weight-8 tau jets,
// above the 1e-10 relative target.
using FloatScalar = Quad;

inline Sampled<MomentSystem<FloatScalar>> sample_soliton(std::uint64_t seed, int n_max, int m_max) {
  const SampleBudget b = sample_budget(n_max, m_max);
  for (int a = 0; a < 32; ++a) {
    const std::uint64_t s = derived_seed(seed, a);
    auto sys = soliton_system(random_soliton<FloatScalar>(s, n_max + 2, 1), b.max_index);
    if (existence(sys, 2 * n_max + 2, m_max + 1).ok())
      return {std::move(sys), s, a};
  }
  throw std::runtime_error("no admissible soliton system in 32 draws");
}

// ---------------------------------------------------------------------------
// Running and reporting

struct Corruption {
  int i = 0, j = 1;
};

// "mu:i,j"
inline Corruption parse_corruption(const std::string& s) {
  int i = 0, j = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "mu:%d,%d%c", &i, &j, &tail) != 2 || i < 0 || j < 0 || i == j)
    throw std::invalid_argument("--corrupt expects mu:i,j with distinct nonnegative indices, got '" + s + "'");
  return {i, j};
}

// Adds 1 to mu_{ij} (and keeps antisymmetry).
template <typename F>
void corrupt(MomentSystem<F>& sys, const Corruption& c) {
  if (std::max(c.i, c.j) > sys.max_index()) throw std::invalid_argument("--corrupt index beyond max_index");
  sys.set_mu(c.i, c.j, F(sys.mu(c.i, c.j) + F(1)));
}

inline json params_json(const IdentityParams& p) {
  return {{"n", p.n}, {"m", p.m}, {"l", p.l}, {"k", p.k}, {"part", p.part}};
}

// Result of one suite on one system.
struct SuiteRun {
  std::size_t instances = 0;
  std::size_t nonzero = 0;
  std::size_t degenerate = 0;
  json worst = 0;           // residual of largest magnitude, 0 when all vanish
  double worst_mag = -1;
  double worst_rel = 0;  // floating runs: largest residual over its bound
  json failing = json::array();
};

inline constexpr double float_tolerance = 1e-10;  // relative to the no-cancellation bound
inline constexpr std::size_t max_failing_listed = 5;

template <typename F>
SuiteRun run_suite(const Suite<F>& suite, Workspace<F>& ws, const Grid& grid, const Filter& filter, const std::string& kind) {
  SuiteRun r;
  for (const auto& p : suite.instances(grid)) {
    if (!filter.admits(p)) continue;
    ++r.instances;
    json where = params_json(p);
    where["kind"] = kind;
    try {
      Outcome<F> o = suite.eval(ws, p);
      bool bad = false;
      for (const auto& v : o.values) {
        const double mag = magnitude(v);
        if constexpr (!is_exact_v<F>)
          if (mag > 0) r.worst_rel = std::max(r.worst_rel, o.scale > 0 ? mag / o.scale : HUGE_VAL);
        const bool nz = is_exact_v<F> ? !is_zero(v) : mag > float_tolerance * o.scale;
        if (!nz) continue;
        bad = true;
        if (mag > r.worst_mag) {
          r.worst_mag = mag;
          if constexpr (is_exact_v<F>) r.worst = scalar_json(magnitude_exact(v));
          else r.worst = mag;
        }
      }
      if (bad) {
        ++r.nonzero;
        if (r.failing.size() < max_failing_listed) r.failing.push_back(where);
      }
    } catch (const VanishingNormalizer& e) {
      ++r.degenerate;
      where["degenerate"] = e.what();
      if (r.failing.size() < max_failing_listed) r.failing.push_back(where);
    }
  }
  if constexpr (!is_exact_v<F>)
    if (r.nonzero == 0) r.worst = 0.0;
  return r;
}

// One system to verify and where it came from.
template <typename F>
struct Subject {
  MomentSystem<F> sys;
  std::uint64_t seed = 0;
  int resampled = 0;
};

struct VerifyOptions {
  Grid grid;
  Filter filter;
  std::vector<std::string> identities;  // empty: all that apply
  unsigned threads = 0;                 // 0: hardware concurrency
};

// Per (suite, subject) outcome, in registry-then-subject order.
struct EntryResult {
  std::string suite, tag, kind;
  std::uint64_t seed;
  int resampled;
  SuiteRun run;
};

// Largest jet weight the selected catalog identities need on one kind;
// every catalog evaluation then shares a single Pfaffian context.
template <typename Selected>
int catalog_weight(Constraint kind, const Grid& g, const VerifyOptions& opt, Selected selected) {
  int w = 0;
  for (const auto& info : identity_catalog()) {
    const auto s = detail::catalog_suite<Rational>(info);
    if (!selected(s.name) || !s.runs_on(kind)) continue;
    for (const auto& p : s.instances(g))
      if (opt.filter.admits(p)) w = std::max(w, required_weight(identity_terms(info.id, p, g.components)));
  }
  return w;
}

template <typename F>
std::vector<EntryResult> verify_subjects(const std::vector<Subject<F>>& subjects, const VerifyOptions& opt) {
  const auto registry = suite_registry<F>();
  // Names are checked against the rational registry, the widest one; a
  // suite another field lacks just yields no entries there.
  const auto known = suite_registry<Rational>();
  for (const auto& want : opt.identities) {
    bool found = std::any_of(known.begin(), known.end(), [&](const Suite<Rational>& s) { return s.name == want; });
    if (!found) throw std::invalid_argument("unknown identity '" + want + "'");
  }
  auto selected = [&](const std::string& name) {
    return opt.identities.empty() || std::find(opt.identities.begin(), opt.identities.end(), name) != opt.identities.end();
  };

  std::vector<std::vector<EntryResult>> per(subjects.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < subjects.size();) {
      try {
        const auto& sub = subjects[i];
        Grid g = opt.grid;
        g.components = sub.sys.components();
        Workspace<F> ws(sub.sys, catalog_weight(sub.sys.constraint(), g, opt, selected));
        const std::string kind = constraint_name(sub.sys.constraint());
        for (const auto& s : registry) {
          if (!selected(s.name) || !s.runs_on(sub.sys.constraint())) continue;
          per[i].push_back({s.name, s.tag, kind, sub.seed, sub.resampled, run_suite(s, ws, g, opt.filter, kind)});
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, static_cast<unsigned>(std::max<std::size_t>(subjects.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<EntryResult> out;
  for (auto& v : per)
    for (auto& e : v)
      if (e.run.instances > 0) out.push_back(std::move(e));
  return out;
}

inline std::string status_of(const SuiteRun& r) {
  if (r.nonzero) return "fail";
  if (r.degenerate) return "degenerate";
  return "pass";
}

// Entries, one per (identity, kind, seed), plus a pass/fail tally.
inline json report_json(const std::vector<EntryResult>& results, const VerifyOptions& opt, const std::string& mode) {
  json params = {{"n_max", opt.grid.n_max}, {"m_max", opt.grid.m_max}};
  if (opt.filter.n) params["n"] = *opt.filter.n;
  if (opt.filter.m) params["m"] = *opt.filter.m;
  if (opt.filter.l) params["l"] = *opt.filter.l;
  json entries = json::array();
  std::size_t passed = 0, failed = 0;
  for (const auto& e : results) {
    const std::string st = status_of(e.run);
    (st == "pass" ? passed : failed)++;
    json j;
    j["identity"] = e.suite;
    j["paper_eq"] = e.tag;
    j["kind"] = e.kind;
    j["params"] = params;
    j["seed"] = e.seed;
    j["resampled"] = e.resampled;
    j["instances"] = e.run.instances;
    j["residual_max_abs_or_zero"] = e.run.worst;
    if (mode != "exact") j["residual_max_rel"] = e.run.worst_rel;
    j["status"] = st;
    if (st != "pass") j["failing_params"] = e.run.failing;
    entries.push_back(std::move(j));
  }
  json rep;
  rep["mode"] = mode;
  rep["entries"] = std::move(entries);
  rep["passed"] = passed;
  rep["failed"] = failed;
  return rep;
}

}  // namespace pfsop
