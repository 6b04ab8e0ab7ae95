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

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace pfsop {

using Rational = mpq_class;

// Pair of field elements with i^2 = -1. Used with Rational for exact
// complex data; conjugation flips the imaginary part.
template <typename T>
struct Gaussian {
  T re{0};
  T im{0};

  Gaussian() = default;
  Gaussian(int v) : re(v), im(0) {}  // NOLINT(runtime/explicit)
  Gaussian(const T& r) : re(r), im(0) {}  // NOLINT(runtime/explicit)
  Gaussian(const T& r, const T& i) : re(r), im(i) {}

  Gaussian& operator+=(const Gaussian& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    T r = re * o.re - im * o.im;
    T i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Gaussian& operator/=(const Gaussian& o) {
    T n = o.re * o.re + o.im * o.im;
    if (n == 0) throw std::domain_error("division by zero");
    T r = (re * o.re + im * o.im) / n;
    T i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend Gaussian operator-(const Gaussian& a) { return Gaussian(T(-a.re), T(-a.im)); }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

using GaussianRational = Gaussian<Rational>;

template <typename F>
struct field_traits;

template <>
struct field_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool complex = false;
  static constexpr const char* name = "rational";
};

template <>
struct field_traits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr bool complex = true;
  static constexpr const char* name = "gaussian";
};

template <>
struct field_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool complex = false;
  static constexpr const char* name = "float";
};

// Extended precision for reference trajectories.
template <>
struct field_traits<long double> {
  static constexpr bool exact = false;
  static constexpr bool complex = false;
  static constexpr const char* name = "extended";
};

// Quadruple precision (GCC's __float128, software arithmetic) for floating
// identity checks on ill-conditioned soliton moments.
using Quad = __float128;

template <>
struct field_traits<Quad> {
  static constexpr bool exact = false;
  static constexpr bool complex = false;
  static constexpr const char* name = "quad";
};

template <typename F>
inline constexpr bool is_exact_v = field_traits<F>::exact;

// Embed a rational constant into a field.
template <typename F>
F from_rational(const Rational& r) {
  if constexpr (std::is_same_v<F, double>) {
    return r.get_d();
  } else if constexpr (std::is_same_v<F, long double> || std::is_same_v<F, Quad>) {
    // Exact for the small integers that occur as constants.
    return static_cast<F>(r.get_num().get_d()) / static_cast<F>(r.get_den().get_d());
  } else {
    return F(r);
  }
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(long double x) { return x == 0.0L; }
inline bool is_zero(Quad x) { return x == 0; }
template <typename T>
bool is_zero(const Gaussian<T>& x) {
  return is_zero(x.re) && is_zero(x.im);
}

inline Rational conj(const Rational& x) { return x; }
inline double conj(double x) { return x; }
inline long double conj(long double x) { return x; }
inline Quad conj(Quad x) { return x; }
template <typename T>
Gaussian<T> conj(const Gaussian<T>& x) {
  return Gaussian<T>(x.re, T(-x.im));
}

// Size used to rank pivots and to report residuals. For exact data the
// value itself (not a float) is reported, see magnitude_exact.
inline double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(long double x) { return static_cast<double>(std::fabs(x)); }
inline double magnitude(Quad x) { return static_cast<double>(x < 0 ? -x : x); }
template <typename T>
double magnitude(const Gaussian<T>& x) {
  return std::max(magnitude(x.re), magnitude(x.im));
}

inline Rational magnitude_exact(const Rational& x) { return abs(x); }
inline Rational magnitude_exact(const GaussianRational& x) {
  Rational a = abs(x.re), b = abs(x.im);
  return a < b ? b : a;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/' || c == '+'))
      throw std::invalid_argument("malformed rational: " + s);
  }
  Rational q;
  if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    throw std::invalid_argument("malformed rational: " + s);
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline void require_exact_mode(bool exact, const char* what) {
  if (!exact) throw std::logic_error(std::string(what) + " needs exact scalars");
}

}  // namespace pfsop
