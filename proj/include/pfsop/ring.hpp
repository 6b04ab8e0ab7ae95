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

// Uniform access to zero/one and unit tests across scalars and jets, so
// the Pfaffian and polynomial code can be written once.

#include "pfsop/jet.hpp"
#include "pfsop/scalar.hpp"

namespace pfsop {

template <typename R>
struct ring_traits {
  using scalar = R;
  static R zero_like(const R&) { return R(0); }
  static R one_like(const R&) { return R(1); }
  static bool is_zero(const R& x) { return pfsop::is_zero(x); }
  static bool is_unit(const R& x) { return !pfsop::is_zero(x); }
  static double pivot_size(const R& x) { return magnitude(x); }
  static const R& base(const R& x) { return x; }
  static constexpr bool has_units = true;
};

template <typename F>
struct ring_traits<Jet<F>> {
  using scalar = F;
  static Jet<F> zero_like(const Jet<F>& x) { return Jet<F>(x.shape()); }
  static Jet<F> one_like(const Jet<F>& x) { return Jet<F>(x.shape(), F(1)); }
  static bool is_zero(const Jet<F>& x) { return x.is_zero(); }
  static bool is_unit(const Jet<F>& x) { return x.is_unit(); }
  static double pivot_size(const Jet<F>& x) { return magnitude(x.base()); }
  static const F& base(const Jet<F>& x) { return x.base(); }
  static constexpr bool has_units = true;
};

template <typename R>
R inverse_of(const R& x) {
  if constexpr (std::is_same_v<R, Jet<typename ring_traits<R>::scalar>>) {
    return x.inverse();
  } else {
    if (pfsop::is_zero(x)) throw std::domain_error("division by zero");
    return R(1) / x;
  }
}

}  // namespace pfsop
