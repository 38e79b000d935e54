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

// Symbolic game on continued fraction digits bounded by M. Bob appends any
// finite block of digits in [1, M]; Alice answers with exactly T digits
// that make some convergent satisfy the congruence target.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "badnum/cf.hpp"
#include "badnum/congruence.hpp"
#include "badnum/error.hpp"
#include "badnum/lagrange.hpp"

namespace badnum {

struct BmsTurn {
  std::size_t round = 0;
  std::vector<Digit> bob;
  std::vector<Digit> alice;        // search word, then 1s up to T
  std::size_t search_length = 0;
  std::size_t convergent_index = 0;  // k with j | p_k, i | q_k
};

struct BmsResult {
  Digit M = 2;
  std::size_t T = 0;
  Multiplier m;
  CFWord word;
  std::vector<BmsTurn> turns;
  std::optional<std::string> rejection;  // illegal Bob move
};

/// Bob sees the digits so far and the round number.
using BmsBob = std::function<std::vector<Digit>(const std::vector<Digit>&, std::size_t)>;

class CongruenceAlice {
 public:
  CongruenceAlice(const Multiplier& m, Digit M) : m_(m), search_(m.i, m.j, M) {}

  const Multiplier& multiplier() const noexcept { return m_; }
  std::size_t T() const noexcept { return search_.T(); }
  Digit alphabet() const noexcept { return search_.alphabet(); }

  /// Search word from `s`, then padding to exactly `stride` digits.
  std::vector<Digit> reply(const ConvergentState& s, std::size_t stride,
                           std::size_t* search_length = nullptr) const {
    std::vector<Digit> w = search_.extend(s).word;
    if (w.size() > stride) throw InternalError("search word longer than the stride");
    if (search_length) *search_length = w.size();
    w.resize(stride, 1);
    return w;
  }

 private:
  Multiplier m_;
  CongruenceSearch search_;
};

/// Bob playing blocks of uniformly random length in [0, max_len] and
/// uniformly random digits in [1, M].
class RandomBmsBob {
 public:
  RandomBmsBob(std::uint64_t seed, Digit M, std::size_t max_len = 8)
      : rng_(std::make_shared<std::mt19937_64>(seed)), M_(M), max_len_(max_len) {}

  std::vector<Digit> operator()(const std::vector<Digit>&, std::size_t) const {
    std::uniform_int_distribution<std::size_t> len(0, max_len_);
    std::uniform_int_distribution<Digit> digit(1, M_);
    std::vector<Digit> out(len(*rng_));
    for (Digit& a : out) a = digit(*rng_);
    return out;
  }

 private:
  std::shared_ptr<std::mt19937_64> rng_;
  Digit M_;
  std::size_t max_len_;
};

inline BmsResult run_bms_symbolic(Digit M, std::size_t T, const CongruenceAlice& alice,
                                  const BmsBob& bob, std::size_t rounds) {
  if (alice.alphabet() != M) throw DomainError("alice plays a different alphabet");
  if (T < alice.T())
    throw DomainError("stride T=" + std::to_string(T) + " is below T(i,j,M)=" +
                      std::to_string(alice.T()));
  BmsResult r;
  r.M = M;
  r.T = T;
  r.m = alice.multiplier();
  std::vector<Digit> digits;
  ConvergentState s = initial_state();
  for (std::size_t round = 0; round < rounds; ++round) {
    BmsTurn turn;
    turn.round = round;
    turn.bob = bob(digits, round);
    for (Digit a : turn.bob) {
      if (a < 1 || a > M) {
        r.rejection = "round " + std::to_string(round) + ": bob digit " + std::to_string(a) +
                      " outside [1, " + std::to_string(M) + "]";
        r.word = CFWord(digits);
        return r;
      }
      advance(s, a);
      digits.push_back(a);
    }
    turn.alice = alice.reply(s, T, &turn.search_length);
    if (turn.search_length == 0) turn.convergent_index = s.index;
    for (std::size_t z = 0; z < turn.alice.size(); ++z) {
      advance(s, turn.alice[z]);
      if (z + 1 == turn.search_length) turn.convergent_index = s.index;
    }
    digits.insert(digits.end(), turn.alice.begin(), turn.alice.end());
    r.turns.push_back(std::move(turn));
  }
  r.word = CFWord(std::move(digits));
  return r;
}

}  // namespace badnum
