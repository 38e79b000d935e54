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

#include <gmpxx.h>
#include <mpfr.h>

#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "badnum/error.hpp"

namespace badnum {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Binary precision used wherever a real number is approximated
/// (a little over 50 decimal digits).
inline constexpr mpfr_prec_t kRealPrecision = 170;

inline BigRat make_rat(const BigInt& p, const BigInt& q) {
  if (q == 0) throw DomainError("zero denominator");
  BigRat r(p, q);
  r.canonicalize();
  return r;
}

inline BigInt floor_of(const BigRat& x) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline BigInt ceil_of(const BigRat& x) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigRat pow_rat(const BigRat& base, long e) {
  const unsigned long m = e < 0 ? static_cast<unsigned long>(-e)
                                : static_cast<unsigned long>(e);
  BigRat r(pow_int(base.get_num(), m), pow_int(base.get_den(), m));
  if (e < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    r = 1 / r;
  }
  r.canonicalize();
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Largest r >= 0 with r^e <= y (y >= 0).
inline BigInt floor_root(const BigInt& y, unsigned long e) {
  if (y < 0) throw DomainError("root of a negative number");
  BigInt r;
  mpz_root(r.get_mpz_t(), y.get_mpz_t(), e);
  return r;
}

/// Smallest r >= 0 with r^e >= y.
inline BigInt ceil_root(const BigInt& y, unsigned long e) {
  if (y <= 0) return 0;
  BigInt r = floor_root(y, e);
  if (pow_int(r, e) < y) ++r;
  return r;
}

/// Largest integer q >= 0 with q^e <= x.
inline BigInt floor_root(const BigRat& x, unsigned long e) {
  return floor_root(BigInt(floor_of(x)), e);
}

/// Smallest integer q >= 0 with q^e >= x.
inline BigInt ceil_root(const BigRat& x, unsigned long e) {
  return ceil_root(BigInt(ceil_of(x)), e);
}

/// "p/q" with q >= 1, also for integers.
inline std::string to_string(const BigRat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }

namespace detail {

inline std::size_t scan_digits(std::string_view s, std::size_t pos) {
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  return pos;
}

}  // namespace detail

/// Parses "p/q", "p", or a decimal such as "0.25" or "1e-2" into an exact
/// rational. `column_offset` shifts reported columns when `s` is a slice.
inline BigRat parse_rational(std::string_view s, std::size_t column_offset = 0) {
  auto fail = [&](std::size_t pos, const std::string& msg) -> BigRat {
    throw ParseError("invalid rational '" + std::string(s) + "': " + msg, 1,
                     column_offset + pos + 1);
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  std::size_t end = detail::scan_digits(s, pos);
  std::string int_part(s.substr(pos, end - pos));
  pos = end;
  BigRat value;
  if (pos < s.size() && s[pos] == '/') {
    if (int_part.empty()) return fail(pos, "missing numerator");
    ++pos;
    end = detail::scan_digits(s, pos);
    if (end == pos) return fail(pos, "missing denominator");
    BigInt den(std::string(s.substr(pos, end - pos)), 10);
    if (den == 0) return fail(pos, "zero denominator");
    pos = end;
    if (pos != s.size()) return fail(pos, "trailing characters");
    value = make_rat(BigInt(int_part, 10), den);
  } else {
    std::string frac_part;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      end = detail::scan_digits(s, pos);
      frac_part = std::string(s.substr(pos, end - pos));
      pos = end;
    }
    if (int_part.empty() && frac_part.empty()) return fail(pos, "no digits");
    long exponent = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      ++pos;
      bool exp_negative = false;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        exp_negative = s[pos] == '-';
        ++pos;
      }
      end = detail::scan_digits(s, pos);
      if (end == pos || end - pos > 6) return fail(pos, "bad exponent");
      exponent = std::strtol(std::string(s.substr(pos, end - pos)).c_str(),
                             nullptr, 10);
      if (exp_negative) exponent = -exponent;
      pos = end;
    }
    if (pos != s.size()) return fail(pos, "trailing characters");
    BigInt mantissa((int_part.empty() ? std::string("0") : int_part) + frac_part, 10);
    value = BigRat(mantissa) *
            pow_rat(BigRat(10), exponent - static_cast<long>(frac_part.size()));
  }
  if (negative) value = -value;
  return value;
}

inline BigInt parse_integer(std::string_view s) {
  const BigRat r = parse_rational(s);
  if (r.get_den() != 1) throw ParseError("expected an integer: " + std::string(s), 1, 1);
  return r.get_num();
}

/// RAII holder for an MPFR value.
class Real {
 public:
  explicit Real(mpfr_prec_t precision = kRealPrecision) { mpfr_init2(value_, precision); }
  ~Real() { mpfr_clear(value_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

  BigRat to_rational() const {
    BigRat r;
    mpfr_get_q(r.get_mpq_t(), value_);
    return r;
  }

 private:
  mpfr_t value_;
};

/// Rational lower bound for q^(1/d), correct to kRealPrecision bits.
inline BigRat root_lower_bound(const BigInt& q, unsigned long d) {
  Real r;
  mpfr_set_z(r.get(), q.get_mpz_t(), MPFR_RNDD);
  mpfr_rootn_ui(r.get(), r.get(), d, MPFR_RNDD);
  return r.to_rational();
}

/// Decimal rendering with `significant` significant digits.
inline std::string to_decimal(const BigRat& x, int significant = 12) {
  Real r(kRealPrecision + 64);
  mpfr_set_q(r.get(), x.get_mpq_t(), MPFR_RNDN);
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Rg", significant, r.get());
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

/// Nearest double; for reporting only.
inline double to_double(const BigRat& x) { return x.get_d(); }

/// Rational within 2^-kRealPrecision (relative) of sqrt(x), rounded toward
/// zero; for reporting only.
inline BigRat sqrt_approx(const BigRat& x) {
  Real r;
  mpfr_set_q(r.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDD);
  return r.to_rational();
}

}  // namespace badnum
