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

// Acceptance run: one PASS/FAIL line per criterion, with wall time
// against its budget. Oracles are computed here, apart from the library
// code under test, wherever that is practical.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "badnum/bms.hpp"
#include "badnum/cf.hpp"
#include "badnum/congruence.hpp"
#include "badnum/constructor.hpp"
#include "badnum/geometry.hpp"
#include "badnum/hgame.hpp"
#include "badnum/lagrange.hpp"

using namespace badnum;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %s %s: %s (%.2fs of %.0fs%s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s,
              budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

BigRat rat(long p, long q) { return make_rat(BigInt(p), BigInt(q)); }

// min over q in [q_lo, q_hi] of q ||q x|| for x = num/den, as an exact rational.
BigRat brute_lagrange(const BigRat& x, unsigned long q_lo, unsigned long q_hi) {
  const BigInt& num = x.get_num();
  const BigInt& den = x.get_den();
  BigInt r = (num * q_lo) % den;
  const BigInt step = num % den;
  BigInt best_num(-1), best_q(1);  // best = best_num / den, scaled by q
  for (unsigned long q = q_lo; q <= q_hi; ++q) {
    const BigInt m = std::min(r, BigInt(den - r));
    const BigInt v = m * q;
    if (best_num < 0 || v < best_num) best_num = v;
    r += step;
    if (r >= den) r -= den;
  }
  return make_rat(best_num, den);
}

// Every reduced rational point of b with denominator <= Q, by plain loops.
std::vector<Point> brute_points(const Ball& b, long Q) {
  std::set<Point> s;
  const std::size_t d = b.dim();
  for (long q = 1; q <= Q; ++q) {
    std::vector<BigInt> lo(d), hi(d);
    bool any = true;
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = ceil_of(BigRat((b.center[c] - b.radius) * q));
      hi[c] = floor_of(BigRat((b.center[c] + b.radius) * q));
      any = any && lo[c] <= hi[c];
    }
    if (!any) continue;
    std::vector<BigInt> p = lo;
    while (true) {
      Point x;
      for (std::size_t c = 0; c < d; ++c) x.push_back(make_rat(p[c], BigInt(q)));
      s.insert(x);
      std::size_t c = 0;
      while (c < d && p[c] == hi[c]) {
        p[c] = lo[c];
        ++c;
      }
      if (c == d) break;
      ++p[c];
    }
  }
  return {s.begin(), s.end()};
}

// Points lie on one hyperplane of R^d (d in {1, 2}).
bool coplanar(const std::vector<Point>& pts, std::size_t d) {
  if (pts.size() <= d) return true;
  if (d == 1) {
    for (const auto& x : pts)
      if (x != pts[0]) return false;
    return true;
  }
  // d == 2: collinear, using the first point distinct from pts[0].
  std::size_t k = 1;
  while (k < pts.size() && pts[k] == pts[0]) ++k;
  if (k == pts.size()) return true;
  const BigRat ux = pts[k][0] - pts[0][0], uy = pts[k][1] - pts[0][1];
  for (const auto& x : pts) {
    const BigRat vx = x[0] - pts[0][0], vy = x[1] - pts[0][1];
    if (ux * vy - uy * vx != 0) return false;
  }
  return true;
}

}  // namespace

int main() {
  run("C1", "determinant identity at every prefix", 10, [] {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> digit(1, 9), depth(1, 200);
    std::size_t prefixes = 0;
    for (int w = 0; w < 100000; ++w) {
      ConvergentState s = initial_state();
      const int n = depth(rng);
      for (int k = 1; k <= n; ++k) {
        advance(s, static_cast<Digit>(digit(rng)));
        const BigInt det = s.p_prev * s.q_cur - s.p_cur * s.q_prev;
        if (det != ((k % 2) ? -1 : 1))
          return Outcome{false, "word " + std::to_string(w) + " prefix " + std::to_string(k)};
        ++prefixes;
      }
    }
    return Outcome{true, "1e5 words, " + std::to_string(prefixes) + " prefixes"};
  });

  run("C2", "lagrange_cf against the brute oracle", 30, [] {
    Outcome o;
    for (Digit a : {1u, 2u}) {
      const BigRat surrogate = evaluate(CFWord::repeated(a, 200));
      const BigRat oracle = brute_lagrange(surrogate, 100'000, 1'000'000);
      const BigRat est = lagrange_cf(CFWord::repeated(a, 60)).value;
      const BigRat err = abs(BigRat(est - oracle));
      const bool ok = err < rat(1, 1'000'000'000);
      o.pass = o.pass && ok;
      o.detail += std::string(a == 1 ? "ones " : "; twos ") + to_decimal(est) + " vs " + to_decimal(oracle) +
                  " (|diff| " + to_decimal(err, 3) + ")";
    }
    return o;
  });

  run("C3", "crude bound over random F_5 words", 120, [] {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> digit(1, 5);
    std::size_t checks = 0, violations = 0;
    BigRat worst(1000);
    for (int w = 0; w < 100; ++w) {
      std::vector<Digit> d(50);
      for (auto& a : d) a = static_cast<Digit>(digit(rng));
      const CFWord word(d);
      for (long i = 1; i <= 4; ++i)
        for (long j = 1; j <= 4; ++j) {
          if (std::gcd(i, j) != 1) continue;
          const auto r = check_crude_bound(word, Multiplier(BigInt(i), BigInt(j)), 10'000);
          ++checks;
          if (!r.holds) ++violations;
          worst = std::min(worst, r.margin);
        }
    }
    return Outcome{violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) +
                                        " violations, least margin " + to_decimal(worst, 6)};
  });

  run("C4", "semigroup closure equals the unimodular count", 60, [] {
    Outcome o{true, ""};
    for (std::uint32_t n = 1; n <= 30; ++n) {
      std::size_t count = 0;
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
          for (std::uint32_t c = 0; c < n; ++c)
            for (std::uint32_t d = 0; d < n; ++d) {
              const std::uint32_t det = (a * d + n * n - (b * c) % n) % n;
              if (det == 1 % n || det == (n - 1) % n) ++count;
            }
      const std::size_t size = group_closure(n, 2).size;
      if (size != count) {
        o.pass = false;
        o.detail += "n=" + std::to_string(n) + ": " + std::to_string(size) + " != " + std::to_string(count) + "; ";
      }
      if ((n == 2 && size != 6) || (n == 6 && size != 288)) o.pass = false;
    }
    if (o.pass) o.detail = "n = 1..30 agree; n=2 -> 6, n=6 -> 288";
    return o;
  });

  run("C5", "congruence extension bound and replay", 120, [] {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> digit(1, 9), len(0, 60);
    std::size_t cases = 0, pairs = 0;
    for (long i = 1; i <= 24; ++i)
      for (long j = 1; i * j <= 24; ++j) {
        if (std::gcd(i, j) != 1) continue;
        for (Digit M : {2u, 3u}) {
          ++pairs;
          const CongruenceSearch search(BigInt(i), BigInt(j), M);
          const std::size_t T = search.T();
          for (int t = 0; t < 500; ++t) {
            BigInt pp(1), qp(0), p(0), q(1);
            ConvergentState s = initial_state();
            const int n = len(rng);
            for (int k = 0; k < n; ++k) {
              const Digit a = static_cast<Digit>(digit(rng));
              advance(s, a);
              BigInt np = a * p + pp, nq = a * q + qp;
              pp = p, qp = q, p = np, q = nq;
            }
            const auto word = search.extend(s).word;
            if (word.empty() || word.size() > T)
              return Outcome{false, std::to_string(i) + "/" + std::to_string(j) + ": length " +
                                        std::to_string(word.size()) + " vs T " + std::to_string(T)};
            for (Digit a : word) {
              if (a < 1 || a > M) return Outcome{false, "digit outside alphabet"};
              BigInt np = a * p + pp, nq = a * q + qp;
              pp = p, qp = q, p = np, q = nq;
            }
            if (p < 1 || p % j != 0 || q % i != 0)
              return Outcome{false, std::to_string(i) + "/" + std::to_string(j) + ": replay misses the target"};
            ++cases;
          }
        }
      }
    return Outcome{true, std::to_string(pairs) + " (i, j, M) triples, " + std::to_string(cases) + " starts"};
  });

  run("C6", "constructed word: three good convergents per fraction", 180, [] {
    const auto c = build_decaying(2, 2000, FractionSchedule(4));
    const auto conv = convergent_list(c.word);
    const BigRat x = conv.back().value();
    Outcome o{true, std::to_string(c.word.size()) + " digits;"};
    std::size_t least = SIZE_MAX;
    for (long i = 1; i <= 4; ++i)
      for (long j = 1; j <= 4; ++j) {
        if (std::gcd(i, j) != 1) continue;
        std::size_t good = 0;
        for (std::size_t k = 0; k + 1 < conv.size(); ++k) {
          const BigInt& P = conv[k].p;
          const BigInt& Q = conv[k].q;
          if (P < 1 || P % j != 0 || Q % i != 0) continue;
          const BigInt p = P / j, q = Q / i;
          const BigRat ratio = BigRat(q * q * i * j) * abs(BigRat(rat(i, j) * x - make_rat(p, q)));
          if (ratio <= 1) ++good;
        }
        const auto rep = verify_decaying(c.word, Multiplier(BigInt(i), BigInt(j)));
        if (good < 3 || !rep.all_hold || rep.count() != good) o.pass = false;
        least = std::min(least, good);
        if (good < 3) o.detail += " " + std::to_string(i) + "/" + std::to_string(j) + " has " + std::to_string(good);
      }
    o.detail += " fewest qualifying convergents for a fraction: " + std::to_string(least);
    return o;
  });

  run("C7", "simplex lemma on random balls", 120, [] {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coord(0, 1'000'000);
    std::size_t witnesses = 0, mismatches = 0, nonempty = 0;
    for (std::size_t d : {1u, 2u}) {
      const BigRat r = d == 1 ? rat(1, 100) : rat(1, 1000);
      const long Q = denominator_bound(d, r).get_si();
      for (int t = 0; t < 100; ++t) {
        Point c;
        for (std::size_t z = 0; z < d; ++z) c.push_back(rat(coord(rng), 1'000'000));
        const Ball b(c, r);
        const auto res = verify_simplex(b);
        const auto pts = brute_points(b, Q);
        if (res.kind == SimplexCheck::Kind::violation) ++witnesses;
        if (!coplanar(pts, d)) ++witnesses;
        if (pts.size() != res.points.size()) ++mismatches;
        if (!pts.empty()) ++nonempty;
      }
    }
    return Outcome{witnesses == 0 && mismatches == 0,
                   std::to_string(witnesses) + " witnesses, " + std::to_string(mismatches) +
                       " enumeration mismatches, " + std::to_string(nonempty) + " of 200 balls held points"};
  });

  run("C8", "hyperplane game verifier and fault injection", 300, [] {
    HGameConfig cfg;
    cfg.beta = rat(1, 4);
    cfg.initial = Ball({rat(1, 2)}, rat(1, 2));
    cfg.rounds = 40;
    MultiplierAlice alice(cfg);
    Outcome o{true, ""};
    std::size_t violations = 0;
    std::vector<std::pair<std::string, BobStrategy>> bobs = {
        {"random-1", RandomBob(1)}, {"random-2", RandomBob(2)}, {"random-3", RandomBob(3)}, {"greedy", bob_greedy_rational}};
    for (auto& [name, bob] : bobs) {
      const auto t = run_hgame(cfg, alice, bob);
      const auto rep = verify_hgame_outcome(t, cfg);
      violations += rep.violations.size();
      if (!rep.pass() || t.abort || t.rounds.size() != 40) {
        o.pass = false;
        o.detail += name + " failed; ";
      }
    }
    o.detail += std::to_string(violations) + " violations over 4 games; ";
    // Fault injection: the target's image under the first multiplier is a
    // Fibonacci ratio with denominator in the last window Alice serves.
    const BigInt q("701408733"), p = BigInt(19660) * q + BigInt("433494437");
    const BigRat y = make_rat(p, BigInt(q * 65536));
    HGameConfig f = cfg;
    f.initial = Ball({y}, rat(1, 1));
    MultiplierAlice fa(f);
    const auto honest = verify_hgame_outcome(run_hgame(f, fa, bob_toward({y})), f);
    const auto bad = verify_hgame_outcome(run_hgame(f, corrupt_at(fa, 39), bob_toward({y})), f);
    const bool detected = honest.pass() && !bad.violations.empty();
    o.pass = o.pass && detected;
    o.detail += detected ? "corrupted turn 39 detected (" + std::to_string(bad.violations.size()) + " witness)"
                         : "fault NOT detected";
    return o;
  });

  run("C9", "symbolic game for 2/1 against random Bob", 60, [] {
    const CongruenceAlice alice(Multiplier(2, 1), 2);
    const auto r = run_bms_symbolic(2, alice.T(), alice, RandomBmsBob(1, 2), 30);
    if (r.rejection) return Outcome{false, *r.rejection};
    // Recount from the word itself.
    std::size_t even = 0;
    const auto conv = convergent_list(r.word);
    std::set<std::size_t> logged;
    for (const auto& t : r.turns) logged.insert(t.convergent_index);
    for (std::size_t k : logged)
      if (k >= 1 && conv[k - 1].q % 2 == 0) ++even;
    std::size_t all_even = 0;
    for (const auto& c : conv)
      if (c.q % 2 == 0) ++all_even;
    const auto rep = verify_decaying(r.word, Multiplier(2, 1));
    bool ratios = rep.all_hold;
    for (const auto& c : rep.convergents) ratios = ratios && c.ratio <= 1;
    return Outcome{even >= 30 && rep.count() >= 30 && ratios,
                   std::to_string(even) + " logged turns with even denominator, " + std::to_string(all_even) +
                       " even denominators in all, " + std::to_string(rep.count()) + " checked, ratios <= 1: " +
                       (ratios ? "yes" : "no")};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
