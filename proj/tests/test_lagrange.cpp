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
#include <set>

#include "badnum/lagrange.hpp"
#include "support.hpp"

using namespace badnum;
using badnum::testing::frac;

namespace {

const BigRat kInvSqrt5("4472135954999579/10000000000000000");
const BigRat kInvSqrt8("3535533905932738/10000000000000000");

BigRat absdiff(const BigRat& a, const BigRat& b) { return abs(BigRat(a - b)); }

// q ||q x|| by a plain double loop over p.
BigRat naive_min(const BigRat& x, unsigned long q_min, unsigned long q_max) {
  BigRat best(-1);
  for (unsigned long q = q_min; q <= q_max; ++q) {
    const BigRat qx = x * BigRat(q);
    const BigInt f = floor_of(qx);
    const BigRat d = std::min(BigRat(qx - BigRat(f)), BigRat(BigRat(f + 1) - qx));
    const BigRat v = d * BigRat(q);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

}  // namespace

TEST(Lagrange, GoldenWindow) {
  const auto e = lagrange_cf(CFWord::repeated(1, 60));
  EXPECT_LT(absdiff(e.value, kInvSqrt5), BigRat(1, 1'000'000'000));
  EXPECT_EQ(e.window_start, 30u);
  EXPECT_GE(e.window_end, e.window_start);
  EXPECT_LE(e.tail_uncertainty, BigRat(1, 10'000'000'000));
}

TEST(Lagrange, SilverWindow) {
  const auto e = lagrange_cf(CFWord::repeated(2, 60));
  EXPECT_LT(absdiff(e.value, kInvSqrt8), BigRat(1, 1'000'000'000));
}

TEST(Lagrange, ExactWindowOnRationalInput) {
  const auto e = lagrange_cf(CFWord({1, 1, 1, 2}), CfWindow::exact(0));
  EXPECT_GT(e.value, 0);
  EXPECT_EQ(e.window_start, 1u);
  EXPECT_EQ(e.window_end, 3u);
  // x = 5/8: convergents 1/1, 1/2, 2/3 give 3/8, 1/2, 3/8.
  EXPECT_EQ(e.value, BigRat(3, 8));
  EXPECT_EQ(e.argmin_q, 1);
}

TEST(Lagrange, ShortWordRejected) { EXPECT_THROW(lagrange_cf(CFWord({1, 2, 3})), DomainError); }

TEST(Lagrange, TailGuardCanEmptyTheWindow) {
  EXPECT_THROW(lagrange_cf(CFWord::repeated(1, 40)), DomainError);
}

TEST(Lagrange, DirectRationalHitsZero) {
  const auto e = lagrange_direct({BigRat(1, 2)}, 10);
  EXPECT_EQ(e.value, 0);
  EXPECT_EQ(e.argmin_q, 2);
}

TEST(Lagrange, DirectTwoDimensional) {
  const auto e = lagrange_direct({BigRat(1, 3), BigRat(1, 3)}, 10);
  EXPECT_EQ(e.value, 0);
  EXPECT_EQ(e.argmin_q, 3);
}

TEST(Lagrange, DirectMatchesNaive) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const BigRat x = frac(1 + rng() % 99990, 99991 + rng() % 1000);
    const unsigned long lo = 1 + rng() % 20, hi = lo + rng() % 400;
    EXPECT_EQ(lagrange_direct({x}, hi, lo).value, naive_min(x, lo, hi));
  }
}

TEST(Lagrange, CrossOracleOnGoldenDepth40) {
  const CFWord w = CFWord::repeated(1, 40);
  const BigRat x = evaluate(w);
  // At depth 40 the default tail guard leaves no index; 1e-8 still
  // leaves the window far tighter than the agreement asserted.
  const auto cf = lagrange_cf(w, CfWindow{BigRat(1, 2), BigRat(1, 100'000'000)});
  const auto direct = lagrange_direct({x}, cf.q_max.get_ui(), cf.q_min.get_ui());
  EXPECT_LT(absdiff(cf.value, direct.value), BigRat(1, 1'000'000));
  const auto small = lagrange_direct({x}, 10'000, 1'000);
  EXPECT_LT(absdiff(cf.value, small.value), BigRat(1, 1'000'000));
}

TEST(Lagrange, BestApproximationIsConvergent) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<Digit> digit(1, 6);
  for (int t = 0; t < 40; ++t) {
    std::vector<Digit> d(30);
    for (auto& a : d) a = digit(rng);
    const CFWord w(d);
    std::set<BigInt> dens{BigInt(1)};  // q_0 = 1 of the convergent 0/1
    for (const auto& c : convergent_list(w)) dens.insert(c.q);
    const auto e = lagrange_direct({evaluate(w)}, 5000);
    EXPECT_TRUE(dens.count(e.argmin_q)) << to_string(w) << " argmin " << e.argmin_q.get_str();
  }
}

TEST(Lagrange, DirectNonincreasingInQmax) {
  const BigRat x = evaluate(CFWord({3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5}));
  BigRat prev(1000);
  for (unsigned long qm = 1; qm < 3000; qm += 37) {
    const BigRat v = lagrange_direct({x}, qm).value;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(Lagrange, MultiplierMustBeReduced) {
  try {
    Multiplier(BigInt(2), BigInt(4));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("reduce the fraction"), std::string::npos);
  }
}

TEST(Lagrange, CrudeBoundIdentityMultiplier) {
  const auto r = check_crude_bound(CFWord::repeated(1, 60), Multiplier(1, 1), 10'000);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.margin, 0);
}

TEST(Lagrange, CrudeBoundGolden) {
  const CFWord w = CFWord::repeated(1, 60);
  const auto a = check_crude_bound(w, Multiplier(2, 1), 100'000);
  EXPECT_TRUE(a.holds);
  EXPECT_GT(a.margin, 0);
  const auto b = check_crude_bound(w, Multiplier(3, 2), 100'000);
  EXPECT_TRUE(b.holds);
}

TEST(Lagrange, DecayTableLinear) {
  const auto rows = decay_table(CFWord::repeated(1, 60), DecaySchedule::linear(), 5, 100'000);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].m, Multiplier(1, 1));
  EXPECT_EQ(rows[0].weight, 1);
  EXPECT_LT(absdiff(rows[0].weighted_value, kInvSqrt5), BigRat(1, 1000));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].k, k + 1);
    EXPECT_EQ(rows[k].weighted_value, rows[k].weight * rows[k].estimate.value);
  }
}

TEST(Lagrange, DecayTablePowers) {
  const auto s = DecaySchedule::powers(Multiplier(2, 1), weights::sqrt_power(2), "2^(k/2)");
  const auto rows = decay_table(CFWord::repeated(1, 60), s, 4, 20'000);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].m, Multiplier(4, 1));
  EXPECT_EQ(rows[1].weight, 2);
  EXPECT_LT(absdiff(BigRat(rows[0].weight * rows[0].weight), BigRat(2)), BigRat(1, 1'000'000'000));
  EXPECT_LE(rows[0].weight * rows[0].weight, 2);
}

TEST(Lagrange, DecayTableEmptySchedule) {
  const auto s = DecaySchedule::explicit_list({}, {});
  EXPECT_TRUE(decay_table(CFWord::repeated(1, 60), s, 10, 1000).empty());
}

TEST(Lagrange, DecayTableDeterministic) {
  const auto s = DecaySchedule::linear();
  const CFWord w = CFWord::repeated(2, 50);
  const auto a = decay_table(w, s, 9, 5000), b = decay_table(w, s, 9, 5000);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].estimate.value, b[k].estimate.value);
}
