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

// Toda dynamics two ways: B_n, C_n read off Pfaffian tau functions of
// soliton data, and a fixed-step RK4 integration of
//   B_n' = B_n (C_n - C_{n-1}),  C_n' = B_{n+1} - B_n
// on a window whose two edge neighbours are supplied from the tau side.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfsop/indexed.hpp"
#include "pfsop/linalg.hpp"
#include "pfsop/soliton.hpp"

namespace pfsop {

class TauCollision : public std::runtime_error {
 public:
  TauCollision(double t, int order)
      : std::runtime_error("tau_" + std::to_string(order) + " vanishes near t = " + std::to_string(t)), time(t) {}
  double time;
};

// Sites first_site .. first_site + width - 1 over a uniform grid.
struct Trajectory {
  double t0 = 0.0, dt = 0.0;
  int first_site = 0;
  std::vector<std::vector<double>> B, C;  // [time][site]

  std::size_t steps() const { return B.empty() ? 0 : B.size() - 1; }
  std::size_t width() const { return B.empty() ? 0 : B.front().size(); }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

struct TodaState {
  std::vector<double> B, C;
};

namespace detail {

// Moments rebuilt at t feed Pfaffians whose leading blocks lose about one
// digit per unit of t at the top sites (long double keeps only 1e-6 of
// C_5 by t = 1), so this path runs in quadruple precision.
using Extended = Quad;

inline SolitonSpec<Extended> extend(const SolitonSpec<double>& s) {
  SolitonSpec<Extended> out;
  for (double x : s.nodes) out.nodes.push_back(x);
  // Keep reciprocal partners reciprocal in the wider type.
  for (const auto& p : s.pairs) {
    out.pairs.push_back({p.a, p.b, p.c});
    if (s.nodes.at(p.a) * s.nodes.at(p.b) == 1.0 || std::fabs(s.nodes.at(p.a) * s.nodes.at(p.b) - 1.0) < 1e-15)
      out.nodes[p.b] = Extended(1) / out.nodes[p.a];
  }
  for (const auto& row : s.d) out.d.emplace_back(row.begin(), row.end());
  out.times = s.times;
  return out;
}

}  // namespace detail

// B_n, C_n for n in [lo, hi] at time t (replacing t_1): rebuild the moments
// there and take log-derivatives through jets.
inline TodaState toda_from_moments(const SolitonSpec<double>& spec, double t, int lo, int hi) {
  using X = detail::Extended;
  if (lo < 0 || hi < lo) throw std::invalid_argument("bad site range");
  auto ext = detail::extend(spec);
  ext.times.resize(std::max<std::size_t>(ext.times.size(), 1), 0.0);
  ext.times[0] = t;
  auto sys = soliton_system(ext, 2 * hi + 3);
  PfaffianContext<X, Jet<X>> ctx(sys, JetShape::box(1, 0));
  auto tau = [&](int n) {
    Jet<X> v = ctx.tau(2 * n, 0);
    if (!std::isfinite(static_cast<double>(v.base())) || std::fabs(static_cast<double>(v.base())) < 1e-250) throw TauCollision(t, 2 * n);
    return v;
  };
  auto A = [&](int n) -> X {
    Jet<X> v = tau(n);
    return v.d1() / v.base();
  };
  TodaState s;
  for (int n = lo; n <= hi; ++n) {
    const X tn = tau(n).base();
    const X prev = n >= 1 ? tau(n - 1).base() : X(0);
    s.B.push_back(static_cast<double>(prev * tau(n + 1).base() / (tn * tn)));
    s.C.push_back(static_cast<double>(A(n + 1) - A(n)));
  }
  return s;
}

// Closed form of tau_{2n}(t) for soliton data. The bi-moment matrix is a sum
// of rank-two pieces c_p w_p (u_a u_b^T - u_b u_a^T) with u_a = (x_a^i)_i, so
// Pf of its leading 2n block expands over n-subsets S of pairs:
//   tau_{2n} = sum_S det[u_a1 u_b1 ... u_an u_bn] prod_{p in S} c_p w_p,
// with the determinants exact and only the phases in floating point.
class SolitonTau {
 public:
  SolitonTau(const SolitonSpec<double>& spec, int n_max) : spec_(spec) {
    if (!spec.d.empty()) throw std::invalid_argument("closed form covers bi-moment data only");
    const int P = static_cast<int>(spec.pairs.size());
    terms_.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
      std::vector<int> pick;
      subsets(P, n, 0, pick, [&](const std::vector<int>& sel) {
        DenseMatrix<Rational> m(2 * n, std::vector<Rational>(2 * n));
        for (int col = 0; col < n; ++col) {
          const auto& pr = spec.pairs[sel[col]];
          const Rational xa(spec.nodes.at(pr.a)), xb(spec.nodes.at(pr.b));
          Rational pa(1), pb(1);
          for (int i = 0; i < 2 * n; ++i) {
            m[i][2 * col] = pa, m[i][2 * col + 1] = pb;
            pa *= xa, pb *= xb;
          }
        }
        const Rational det = n == 0 ? Rational(1) : determinant(m);
        if (is_zero(det)) return;
        Term t{det.get_d(), 0.0, 0.0, sel};
        for (int p : sel) t.coeff *= spec.pairs[p].c;
        terms_[n].push_back(t);
      });
    }
    for (std::size_t n = 0; n < terms_.size(); ++n)
      for (auto& t : terms_[n]) {
        for (int p : t.pairs) {
          const auto& pr = spec.pairs[p];
          t.rate += spec.nodes[pr.a] + spec.nodes[pr.b];
          for (std::size_t l = 1; l < spec.times.size(); ++l)
            t.offset += spec.times[l] * (std::pow(spec.nodes[pr.a], l + 1) + std::pow(spec.nodes[pr.b], l + 1));
        }
      }
  }

  // tau_{2n}(t) and its t_1 derivative, with t in place of t_1.
  std::pair<long double, long double> operator()(int n, double t) const {
    if (n < 0) return {0.0L, 0.0L};
    long double v = 0, dv = 0;
    for (const auto& term : terms_.at(static_cast<std::size_t>(n))) {
      const long double e = term.coeff * std::exp(static_cast<long double>(term.rate) * t + term.offset);
      v += e;
      dv += term.rate * e;
    }
    return {v, dv};
  }

  TodaState state(double t, int lo, int hi) const {
    if (lo < 0 || hi < lo) throw std::invalid_argument("bad site range");
    TodaState s;
    for (int n = lo; n <= hi; ++n) {
      auto prev = (*this)(n - 1, t), cur = (*this)(n, t), next = (*this)(n + 1, t);
      if (!(std::fabs(cur.first) > 1e-250L) || !(std::fabs(next.first) > 1e-250L)) throw TauCollision(t, 2 * n);
      s.B.push_back(static_cast<double>(prev.first * next.first / (cur.first * cur.first)));
      s.C.push_back(static_cast<double>(next.second / next.first - cur.second / cur.first));
    }
    return s;
  }

 private:
  struct Term {
    double coeff, rate, offset;
    std::vector<int> pairs;
  };

  template <typename Fn>
  static void subsets(int P, int n, int start, std::vector<int>& pick, Fn&& fn) {
    if (static_cast<int>(pick.size()) == n) {
      fn(pick);
      return;
    }
    for (int p = start; p < P; ++p) {
      pick.push_back(p);
      subsets(P, n, p + 1, pick, fn);
      pick.pop_back();
    }
  }

  SolitonSpec<double> spec_;
  std::vector<std::vector<Term>> terms_;
};

// Where tau-side values come from: the closed form above, or moments rebuilt
// at each time with jet log-derivatives.
enum class TauPath { closed_form, moments };

inline Trajectory tau_trajectory(const SolitonSpec<double>& spec, int first_site, int width, double t0, double dt,
                                 std::size_t steps, TauPath path = TauPath::closed_form) {
  if (width < 1) throw std::invalid_argument("empty window");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const int hi = first_site + width - 1;
  std::unique_ptr<SolitonTau> closed;
  if (path == TauPath::closed_form) closed = std::make_unique<SolitonTau>(spec, hi + 1);
  Trajectory tr{t0, dt, first_site, {}, {}};
  for (std::size_t k = 0; k <= steps; ++k) {
    auto s = closed ? closed->state(tr.time(k), first_site, hi) : toda_from_moments(spec, tr.time(k), first_site, hi);
    tr.B.push_back(std::move(s.B));
    tr.C.push_back(std::move(s.C));
  }
  return tr;
}

// How the edge neighbours C_{lo-1} and B_{hi+1} are supplied at RK4 stage
// times: frozen to the tau values there, or extrapolated by a cubic through
// the tau values at the last four grid points (the first four at start-up).
enum class EdgeClosure { frozen, extrapolated };

namespace detail {

inline void toda_rhs(const std::vector<double>& b, const std::vector<double>& c, double c_left, double b_right,
                     std::vector<double>& db, std::vector<double>& dc) {
  const std::size_t w = b.size();
  for (std::size_t i = 0; i < w; ++i) {
    const double cl = i == 0 ? c_left : c[i - 1];
    const double br = i + 1 == w ? b_right : b[i + 1];
    db[i] = b[i] * (c[i] - cl);
    dc[i] = br - b[i];
  }
}

// Lagrange cubic through (xs[i], ys[i]) evaluated at x.
inline double cubic(const std::array<double, 4>& xs, const std::array<double, 4>& ys, double x) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double l = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) l *= (x - xs[j]) / (xs[i] - xs[j]);
    acc += l * ys[i];
  }
  return acc;
}

}  // namespace detail

// Window sites first_site .. first_site + width - 1 (first_site >= 1 so
// C_{first_site-1} exists), initial data from the tau side at t0.
inline Trajectory rk4_toda(const SolitonSpec<double>& spec, int first_site, int width, double t0, double dt,
                           std::size_t steps, EdgeClosure closure = EdgeClosure::frozen) {
  if (width < 3) throw std::invalid_argument("RK4 window needs at least 3 sites");
  if (first_site < 1) throw std::invalid_argument("window must start at site 1 or later");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const int lo = first_site, hi = first_site + width - 1;
  const SolitonTau tau(spec, hi + 2);
  auto edges_at = [&](double t) {
    auto s = tau.state(t, lo - 1, hi + 1);
    return std::array<double, 2>{s.C.front(), s.B.back()};
  };
  // Edge values on the grid, needed by the extrapolating closure.
  std::vector<std::array<double, 2>> grid_edges;
  if (closure == EdgeClosure::extrapolated)
    for (std::size_t k = 0; k <= std::max<std::size_t>(steps, 3); ++k) grid_edges.push_back(edges_at(t0 + k * dt));

  auto edge = [&](std::size_t k, double frac) -> std::array<double, 2> {
    const double t = t0 + (static_cast<double>(k) + frac) * dt;
    if (closure == EdgeClosure::frozen) return edges_at(t);
    const std::size_t base = k >= 3 ? k - 3 : 0;
    std::array<double, 4> xs{}, yc{}, yb{};
    for (int i = 0; i < 4; ++i) {
      xs[i] = t0 + static_cast<double>(base + i) * dt;
      yc[i] = grid_edges[base + i][0];
      yb[i] = grid_edges[base + i][1];
    }
    return {detail::cubic(xs, yc, t), detail::cubic(xs, yb, t)};
  };

  auto init = tau.state(t0, lo, hi);
  Trajectory tr{t0, dt, first_site, {init.B}, {init.C}};
  std::vector<double> b = init.B, c = init.C;
  const std::size_t w = static_cast<std::size_t>(width);
  std::vector<double> k1b(w), k1c(w), k2b(w), k2c(w), k3b(w), k3c(w), k4b(w), k4c(w), tb(w), tc(w);
  for (std::size_t k = 0; k < steps; ++k) {
    auto e0 = edge(k, 0.0), eh = edge(k, 0.5), e1 = edge(k, 1.0);
    detail::toda_rhs(b, c, e0[0], e0[1], k1b, k1c);
    for (std::size_t i = 0; i < w; ++i) tb[i] = b[i] + 0.5 * dt * k1b[i], tc[i] = c[i] + 0.5 * dt * k1c[i];
    detail::toda_rhs(tb, tc, eh[0], eh[1], k2b, k2c);
    for (std::size_t i = 0; i < w; ++i) tb[i] = b[i] + 0.5 * dt * k2b[i], tc[i] = c[i] + 0.5 * dt * k2c[i];
    detail::toda_rhs(tb, tc, eh[0], eh[1], k3b, k3c);
    for (std::size_t i = 0; i < w; ++i) tb[i] = b[i] + dt * k3b[i], tc[i] = c[i] + dt * k3c[i];
    detail::toda_rhs(tb, tc, e1[0], e1[1], k4b, k4c);
    for (std::size_t i = 0; i < w; ++i) {
      b[i] += dt / 6.0 * (k1b[i] + 2 * k2b[i] + 2 * k3b[i] + k4b[i]);
      c[i] += dt / 6.0 * (k1c[i] + 2 * k2c[i] + 2 * k3c[i] + k4c[i]);
      if (!std::isfinite(b[i]) || !std::isfinite(c[i]))
        throw std::runtime_error("RK4 state became non-finite at step " + std::to_string(k + 1));
    }
    tr.B.push_back(b);
    tr.C.push_back(c);
  }
  return tr;
}

struct Deviation {
  double max_abs = 0.0;
  std::vector<double> per_site;  // max over time of |B_a - B_b|
};

// Max |B_a - B_b| over the common grid; mismatched grids are an error.
inline Deviation compare(const Trajectory& a, const Trajectory& b) {
  if (a.t0 != b.t0 || a.dt != b.dt || a.steps() != b.steps() || a.first_site != b.first_site ||
      a.width() != b.width())
    throw std::invalid_argument("trajectories are on different grids or windows");
  Deviation d;
  d.per_site.assign(a.width(), 0.0);
  for (std::size_t k = 0; k < a.B.size(); ++k)
    for (std::size_t i = 0; i < a.width(); ++i) d.per_site[i] = std::max(d.per_site[i], std::fabs(a.B[k][i] - b.B[k][i]));
  for (double v : d.per_site) d.max_abs = std::max(d.max_abs, v);
  return d;
}

struct ConvergenceReport {
  std::vector<double> dts, errors;
  double order = 0.0;  // least-squares slope of log error against log dt
};

inline ConvergenceReport convergence(const SolitonSpec<double>& spec, int first_site, int width, double t_end,
                                     const std::vector<double>& dts, EdgeClosure closure = EdgeClosure::frozen) {
  if (dts.size() < 2) throw std::invalid_argument("need at least two step sizes");
  ConvergenceReport r;
  for (double dt : dts) {
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    auto ref = tau_trajectory(spec, first_site, width, 0.0, dt, steps);
    auto num = rk4_toda(spec, first_site, width, 0.0, dt, steps, closure);
    r.dts.push_back(dt);
    r.errors.push_back(compare(ref, num).max_abs);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(r.dts[i]), y = std::log(r.errors[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  r.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return r;
}

// Six reciprocal node pairs with unit amplitudes. Each pair lifts the rank
// of the Hankel tau sequence by one, so six pairs keep tau_{2n} alive (and
// B_n nonzero) through site 5, the right edge of the default window 1..4.
inline SolitonSpec<double> default_soliton() {
  return reciprocal_soliton<double>({1.5, 2.5, 4.0, 6.0, 9.0, 13.0}, {1, 1, 1, 1, 1, 1});
}

// CSV with header t,site,B,C; one row per (time, site).
inline void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,site,B,C\n";
  os.precision(17);
  for (std::size_t k = 0; k < tr.B.size(); ++k)
    for (std::size_t i = 0; i < tr.width(); ++i)
      os << tr.time(k) << ',' << tr.first_site + static_cast<int>(i) << ',' << tr.B[k][i] << ',' << tr.C[k][i] << '\n';
}

}  // namespace pfsop
