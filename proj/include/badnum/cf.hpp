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

// Finite continued fractions [0; a_1, ..., a_n] in exact arithmetic.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "badnum/error.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

/// A partial quotient. Always >= 1.
using Digit = std::uint32_t;

/// The rational [0; a_1, ..., a_n]. Digits are >= 1; the empty word is
/// allowed as a value but has no evaluation.
class CFWord {
 public:
  CFWord() = default;
  explicit CFWord(std::vector<Digit> digits) : digits_(std::move(digits)) {
    for (Digit a : digits_)
      if (a == 0) throw DomainError("partial quotients must be >= 1");
  }
  CFWord(std::initializer_list<Digit> digits) : CFWord(std::vector<Digit>(digits)) {}

  /// n copies of digit a.
  static CFWord repeated(Digit a, std::size_t n) {
    return CFWord(std::vector<Digit>(n, a));
  }

  std::span<const Digit> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  Digit operator[](std::size_t k) const { return digits_[k]; }

  void push_back(Digit a) {
    if (a == 0) throw DomainError("partial quotients must be >= 1");
    digits_.push_back(a);
  }
  void append(std::span<const Digit> more) {
    for (Digit a : more) push_back(a);
  }

  /// Last digit >= 2 unless the word has length <= 1.
  bool is_canonical() const noexcept {
    return digits_.size() <= 1 || digits_.back() >= 2;
  }

  Digit max_digit() const noexcept {
    return digits_.empty() ? 0 : *std::max_element(digits_.begin(), digits_.end());
  }

  friend bool operator==(const CFWord&, const CFWord&) = default;

 private:
  std::vector<Digit> digits_;
};

/// The matrix (p_{n-1}, q_{n-1}; p_n, q_n) after n digits.
struct ConvergentState {
  BigInt p_prev{1};
  BigInt q_prev{0};
  BigInt p_cur{0};
  BigInt q_cur{1};
  std::size_t index = 0;

  BigInt determinant() const { return BigInt(p_prev * q_cur - p_cur * q_prev); }

  /// (-1)^index.
  int expected_determinant() const noexcept { return index % 2 == 0 ? 1 : -1; }

  bool satisfies_invariants() const {
    return determinant() == expected_determinant() && q_cur >= q_prev &&
           q_prev >= 0 && gcd(p_cur, q_cur) == 1;
  }

  friend bool operator==(const ConvergentState&, const ConvergentState&) = default;
};

inline ConvergentState initial_state() { return ConvergentState{}; }

/// Appends digit a in place.
inline void advance(ConvergentState& s, Digit a) {
  BigInt p_next = a * s.p_cur + s.p_prev;
  BigInt q_next = a * s.q_cur + s.q_prev;
  s.p_prev.swap(s.p_cur);
  s.q_prev.swap(s.q_cur);
  s.p_cur.swap(p_next);
  s.q_cur.swap(q_next);
  ++s.index;
}

inline ConvergentState step(ConvergentState s, Digit a) {
  advance(s, a);
  return s;
}

inline ConvergentState state_of(const CFWord& w) {
  ConvergentState s = initial_state();
  for (Digit a : w.digits()) advance(s, a);
  return s;
}

inline BigRat evaluate(const CFWord& w) {
  if (w.empty()) throw DomainError("empty expansion");
  const ConvergentState s = state_of(w);
  return make_rat(s.p_cur, s.q_cur);
}

/// Canonical expansion of a rational in (0,1) by the Euclidean algorithm.
inline CFWord cf_of_rational(const BigRat& x) {
  if (x <= 0 || x >= 1)
    throw DomainError("cf_of_rational needs 0 < x < 1, got " + to_string(x));
  std::vector<Digit> digits;
  BigInt num = x.get_den();
  BigInt den = x.get_num();
  BigInt quotient, remainder;
  while (den != 0) {
    mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(),
                den.get_mpz_t());
    if (!quotient.fits_uint_p())
      throw DomainError("partial quotient exceeds the digit range");
    digits.push_back(static_cast<Digit>(quotient.get_ui()));
    num.swap(den);
    den.swap(remainder);
  }
  return CFWord(std::move(digits));
}

struct Convergent {
  BigInt p;
  BigInt q;
  BigRat value() const { return make_rat(p, q); }
};

/// (p_k, q_k) for k = 1..len(w).
inline std::vector<Convergent> convergent_list(const CFWord& w) {
  std::vector<Convergent> out;
  out.reserve(w.size());
  ConvergentState s = initial_state();
  for (Digit a : w.digits()) {
    advance(s, a);
    out.push_back({s.p_cur, s.q_cur});
  }
  return out;
}

inline std::vector<BigRat> convergents(const CFWord& w) {
  std::vector<BigRat> out;
  out.reserve(w.size());
  for (const auto& c : convergent_list(w)) out.push_back(c.value());
  return out;
}

/// "[0;a1,a2,...,an]".
inline std::string to_string(const CFWord& w) {
  std::string out = "[0;";
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(w[k]);
  }
  out += ']';
  return out;
}

/// Parses "[0;a1,...,an]". Whitespace is ignored; a token "a*r" expands to
/// r copies of a.
inline CFWord parse_cf(std::string_view text) {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> CFWord {
    throw ParseError("invalid continued fraction: " + msg, line, column);
  };
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      if (text[pos] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++pos;
    }
  };
  auto expect = [&](char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
    ++column;
  };
  auto read_number = [&]() -> unsigned long long {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a digit");
    if (pos - start > 10) fail("number too large");
    const unsigned long long v = std::stoull(std::string(text.substr(start, pos - start)));
    column += pos - start;
    return v;
  };

  expect('[');
  if (read_number() != 0) fail("integer part must be 0");
  expect(';');
  std::vector<Digit> digits;
  skip_space();
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
    ++column;
  } else {
    while (true) {
      const std::size_t digit_column = column;
      const unsigned long long a = read_number();
      unsigned long long repeat = 1;
      skip_space();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        ++column;
        repeat = read_number();
        if (repeat > 10'000'000) fail("repeat count too large");
      }
      if (a == 0 || a > 0xffffffffULL) {
        column = digit_column;
        fail("partial quotients must be in [1, 2^32)");
      }
      digits.insert(digits.end(), repeat, static_cast<Digit>(a));
      skip_space();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        ++column;
        continue;
      }
      expect(']');
      break;
    }
  }
  skip_space();
  if (pos != text.size()) fail("trailing characters");
  return CFWord(std::move(digits));
}

}  // namespace badnum
