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

#include <gtest/gtest.h>

#include <random>

#include "badnum/congruence.hpp"

using namespace badnum;

namespace {

// |SL(2, Z/n)| = n^3 prod_{p | n} (1 - 1/p^2).
std::size_t sl2_order(std::uint32_t n) {
  std::size_t num = std::size_t{n} * n * n, den = 1;
  std::uint32_t m = n;
  for (std::uint32_t p = 2; p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    num *= (std::size_t{p} * p - 1);
    den *= std::size_t{p} * p;
  }
  return num / den;
}

ConvergentState random_state(std::mt19937_64& rng, Digit M, std::size_t len) {
  std::uniform_int_distribution<Digit> digit(1, M);
  ConvergentState s = initial_state();
  for (std::size_t k = 0; k < len; ++k) advance(s, digit(rng));
  return s;
}

}  // namespace

TEST(Congruence, Generators) {
  EXPECT_EQ(generator(1, 6), ResidueMatrix::of(0, 1, 1, 1, 6));
  EXPECT_EQ(generator(2, 2), ResidueMatrix::of(0, 1, 1, 0, 2));
  for (std::uint32_t n = 2; n <= 20; ++n)
    for (Digit a = 1; a <= 30; ++a) EXPECT_EQ(generator(a, n).det(), n - 1);
}

TEST(Congruence, TrivialGroup) {
  const auto g = group_closure(1, 2);
  EXPECT_EQ(g.size, 1u);
  EXPECT_EQ(g.max_distance, 0);
}

TEST(Congruence, ClosureMatchesCounts) {
  EXPECT_EQ(group_closure(2, 2).size, 6u);
  EXPECT_EQ(group_closure(6, 2).size, 288u);
  for (std::uint32_t n = 2; n <= 24; ++n) {
    const std::size_t size = group_closure(n, 2).size;
    EXPECT_EQ(size, count_unimodular(n)) << n;
    EXPECT_EQ(size, n <= 2 ? sl2_order(n) : 2 * sl2_order(n)) << n;
  }
}

TEST(Congruence, ClosureRejectsSmallAlphabet) { EXPECT_THROW(group_closure(5, 1), DomainError); }

TEST(Congruence, ModulusLimit) {
  EXPECT_THROW(CongruenceSearch(BigInt(9), BigInt(8), 2), ResourceError);
  EXPECT_THROW(CongruenceSearch(BigInt(2), BigInt(4), 2), DomainError);
}

TEST(Congruence, TBoundSmallCases) {
  EXPECT_EQ(T_bound(1, 1, 2), 1u);
  EXPECT_GE(T_bound(2, 1, 2), 1u);
  for (long i = 1; i <= 5; ++i)
    for (long j = 1; j <= 5; ++j) {
      if (std::gcd(i, j) != 1 || i * j > 24) continue;
      std::size_t prev = T_bound(i, j, 2);
      for (Digit M = 3; M <= 6; ++M) {
        const std::size_t t = T_bound(i, j, M);
        EXPECT_LE(t, prev) << i << "/" << j << " M=" << M;
        prev = t;
      }
    }
}

TEST(Congruence, ExtendExamples) {
  EXPECT_EQ(extend_to_congruence(initial_state(), 2, 1, 2).word, (std::vector<Digit>{2}));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t)
    EXPECT_EQ(extend_to_congruence(random_state(rng, 3, t), 1, 1, 3).word, (std::vector<Digit>{1}));
}

TEST(Congruence, ExtensionReplays) {
  std::mt19937_64 rng(44);
  for (auto [i, j] : std::vector<std::pair<long, long>>{{2, 1}, {1, 2}, {3, 2}, {2, 3}, {5, 4}, {7, 3}, {1, 7}}) {
    for (Digit M : {2u, 3u, 5u}) {
      const CongruenceSearch search(BigInt(i), BigInt(j), M);
      for (int t = 0; t < 50; ++t) {
        ConvergentState s = random_state(rng, M, rng() % 30);
        const auto w = search.extend(s).word;
        ASSERT_GE(w.size(), 1u);
        ASSERT_LE(w.size(), search.T());
        for (Digit a : w) {
          ASSERT_GE(a, 1u);
          ASSERT_LE(a, M);
          advance(s, a);
        }
        EXPECT_GE(s.p_cur, 1);
        EXPECT_EQ(BigInt(s.p_cur % j), 0);
        EXPECT_EQ(BigInt(s.q_cur % i), 0);
      }
    }
  }
}

TEST(Congruence, TIsAttained) {
  // Some reachable residue state needs exactly T steps.
  const CongruenceSearch search(BigInt(3), BigInt(2), 2);
  const auto g = group_closure(6, 2);
  std::size_t worst = 0;
  for (std::uint32_t idx = 0; idx < g.distance.size(); ++idx) {
    if (g.distance[idx] == kUnreached) continue;
    worst = std::max(worst, search.steps_from(ResidueMatrix::from_index(idx, 6)));
  }
  EXPECT_EQ(worst, search.T());
}

TEST(Congruence, GeneratorIdentities) {
  const auto five = sl2_generator_identities_check(5);
  for (const auto& c : five) EXPECT_TRUE(c.pass) << c.name;
  EXPECT_EQ(generator(1, 5), ResidueMatrix::of(0, 1, 1, 1, 5));
  EXPECT_EQ(ResidueMatrix::of(-1, 1, 1, 0, 5) * generator(2, 5), ResidueMatrix::of(1, 1, 0, 1, 5));
  EXPECT_EQ(generator(2, 5) * ResidueMatrix::of(-1, 1, 1, 0, 5), ResidueMatrix::of(1, 0, 1, 1, 5));
  for (std::uint32_t n = 2; n <= 50; ++n)
    for (const auto& c : sl2_generator_identities_check(n)) EXPECT_TRUE(c.pass) << c.name << " n=" << n;
}

TEST(Congruence, OrderAndInverse) {
  for (std::uint32_t n = 2; n <= 12; ++n)
    for (Digit a = 1; a <= 3; ++a) {
      const ResidueMatrix g = generator(a, n);
      EXPECT_EQ(g * semigroup_inverse(g), ResidueMatrix::identity(n));
    }
}
