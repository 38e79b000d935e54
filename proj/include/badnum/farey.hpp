// Copyright 2026 The badnumlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Farey-sequence walks: enumerate reduced fractions of bounded denominator
// in an interval without scanning every denominator.

#include <utility>
#include <vector>

#include "badnum/error.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

struct FareyPair {
  BigInt a, b;  // left = a/b
  BigInt c, d;  // right = c/d
};

/// Consecutive fractions a/b <= x < c/d of the Farey sequence of order
/// max_den (all reduced fractions, any integer part, denominator <= max_den).
inline FareyPair farey_neighbors(const BigRat& x, const BigInt& max_den) {
  if (max_den < 1) throw DomainError("Farey order must be >= 1");
  FareyPair f;
  f.a = floor_of(x);
  f.b = 1;
  f.c = f.a + 1;
  f.d = 1;
  const BigInt& xn = x.get_num();
  const BigInt& xd = x.get_den();
  BigInt k, bound, num, den;
  while (f.b + f.d <= max_den) {
    // mediant <= x  <=>  (a+c)*xd <= x_num*(b+d)
    if ((f.a + f.c) * xd <= xn * (f.b + f.d)) {
      // Largest k with (a + k c)/(b + k d) <= x.
      num = xn * f.b - f.a * xd;   // x b - a, scaled by xd
      den = f.c * xd - xn * f.d;   // c - x d, scaled by xd (> 0)
      mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      bound = (max_den - f.b) / f.d;
      if (bound < k) k = bound;
      f.a += k * f.c;
      f.b += k * f.d;
    } else {
      // Largest k with (k a + c)/(k b + d) > x.
      num = f.c * xd - xn * f.d;
      den = xn * f.b - f.a * xd;
      bound = (max_den - f.d) / f.b;
      if (den == 0) {
        k = bound;
      } else {
        mpz_cdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        k -= 1;
        if (bound < k) k = bound;
      }
      f.c += k * f.a;
      f.d += k * f.b;
    }
  }
  return f;
}

/// All reduced fractions in the closed interval [lo, hi] with denominator
/// <= max_den, in increasing order. Throws ResourceError past `budget`.
inline std::vector<BigRat> fractions_in_interval(const BigRat& lo, const BigRat& hi,
                                                 const BigInt& max_den,
                                                 std::size_t budget = 50'000'000) {
  std::vector<BigRat> out;
  if (hi < lo) return out;
  FareyPair f = farey_neighbors(lo, max_den);
  BigRat left = make_rat(f.a, f.b);
  if (left == lo) out.push_back(left);
  BigInt a = f.a, b = f.b, c = f.c, d = f.d, k, e, g;
  while (true) {
    BigRat right = make_rat(c, d);
    if (right > hi) break;
    out.push_back(right);
    if (out.size() > budget)
      throw ResourceError("fraction enumeration exceeded its budget");
    k = (max_den + b) / d;
    e = k * c - a;
    g = k * d - b;
    a.swap(c);
    b.swap(d);
    c.swap(e);
    d.swap(g);
  }
  return out;
}

/// The fraction of least denominator in the closed interval [lo, hi]
/// (lo <= hi), via the Stern-Brocot descent.
inline BigRat simplest_in_interval(const BigRat& lo, const BigRat& hi) {
  if (hi < lo) throw DomainError("empty interval");
  const BigInt c = ceil_of(lo);
  if (c <= hi) {
    // Integers have denominator 1; take the one nearest to zero.
    if (c > 0) return BigRat(c);
    const BigInt f = floor_of(hi);
    if (f < 0) return BigRat(f);
    return BigRat(0);
  }
  const BigInt fl = floor_of(lo);
  const BigRat inner = simplest_in_interval(1 / (hi - fl), 1 / (lo - fl));
  return fl + 1 / inner;
}

}  // namespace badnum
