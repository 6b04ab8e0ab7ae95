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

// JSON for moment systems, polynomials and banded operators. Rationals are
// "p/q" strings so files round-trip bit for bit; Gaussian rationals are
// ["re", "im"] pairs of such strings.

#include <fstream>
#include <string>

#include <json.hpp>

#include "pfsop/moments.hpp"
#include "pfsop/operators.hpp"
#include "pfsop/poly.hpp"

namespace pfsop {

using json = nlohmann::ordered_json;

inline std::string rational_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline json scalar_json(const Rational& q) { return rational_string(q); }
inline json scalar_json(const GaussianRational& z) { return json::array({rational_string(z.re), rational_string(z.im)}); }
inline json scalar_json(double x) { return x; }

template <typename F>
F scalar_from_json(const json& j);

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
  if (!j.is_string()) throw std::invalid_argument("rational entries must be \"p/q\" strings");
  return parse_rational(j.get<std::string>());
}
template <>
inline GaussianRational scalar_from_json<GaussianRational>(const json& j) {
  if (j.is_string()) return GaussianRational(parse_rational(j.get<std::string>()));
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex entries are [\"re\", \"im\"] pairs");
  return GaussianRational(parse_rational(j[0].get<std::string>()), parse_rational(j[1].get<std::string>()));
}
template <>
inline double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  return parse_rational(j.get<std::string>()).get_d();
}

template <typename F>
json system_json(const MomentSystem<F>& sys) {
  json j;
  j["max_index"] = sys.max_index();
  j["constraint"] = constraint_name(sys.constraint());
  j["field"] = field_traits<F>::name;
  j["components"] = sys.components();
  json mu = json::array();
  for (int i = 0; i <= sys.max_index(); ++i)
    for (int k = i + 1; k <= sys.max_index(); ++k) mu.push_back(json::array({i, k, scalar_json(sys.mu(i, k))}));
  j["mu"] = std::move(mu);
  json beta = json::array();
  for (int k = 1; k <= sys.components(); ++k)
    for (int i = 0; i <= sys.max_index(); ++i) beta.push_back(json::array({k, i, scalar_json(sys.beta(k, i))}));
  j["beta"] = std::move(beta);
  if (sys.has_conjugate()) {
    json bb = json::array();
    for (int k = 1; k <= sys.components(); ++k)
      for (int i = 0; i <= sys.max_index(); ++i) bb.push_back(json::array({k, i, scalar_json(sys.beta_bar(k, i))}));
    j["beta_bar"] = std::move(bb);
  }
  return j;
}

template <typename F>
MomentSystem<F> system_from_json(const json& j) {
  const int max_index = j.at("max_index").get<int>();
  const Constraint tag = parse_constraint(j.at("constraint").get<std::string>());
  int components = j.contains("components") ? j["components"].get<int>() : 0;
  if (!j.contains("components"))
    for (const auto& e : j.value("beta", json::array())) components = std::max(components, e.at(0).get<int>());
  MomentSystem<F> sys(max_index, components, tag, j.contains("beta_bar"));
  for (const auto& e : j.at("mu")) {
    const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a == b) throw std::invalid_argument("diagonal bi-moments are zero by definition");
    F v = scalar_from_json<F>(e.at(2));
    if (a < b) sys.set_mu(a, b, v);
    else sys.set_mu(b, a, -v);
  }
  for (const auto& e : j.value("beta", json::array()))
    sys.set_beta(e.at(0).get<int>(), e.at(1).get<int>(), scalar_from_json<F>(e.at(2)));
  if (j.contains("beta_bar"))
    for (const auto& e : j["beta_bar"])
      sys.set_beta_bar(e.at(0).get<int>(), e.at(1).get<int>(), scalar_from_json<F>(e.at(2)));
  return sys;
}

template <typename R>
json poly_json(const Poly<R>& p) {
  json c = json::array();
  for (int i = 0; i <= p.degree(); ++i) c.push_back(scalar_json(p[static_cast<std::size_t>(i)]));
  return {{"degree", p.degree()}, {"coeffs", std::move(c)}};
}

template <typename R>
Poly<R> poly_from_json(const json& j) {
  Poly<R> p(R(0));
  const auto& c = j.at("coeffs");
  for (std::size_t i = 0; i < c.size(); ++i) p.at(i) = scalar_from_json<R>(c[i]);
  if (p.degree() != j.at("degree").get<int>()) throw std::invalid_argument("degree does not match coefficients");
  return p;
}

template <typename R>
json banded_json(const BandedOp<R>& op) {
  json bands = json::object();
  for (const auto& [off, diag] : op.bands) {
    json d = json::array();
    for (const auto& v : diag) d.push_back(scalar_json(v));
    bands[std::to_string(off)] = std::move(d);
  }
  return {{"N", op.n}, {"bands", std::move(bands)}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace pfsop
