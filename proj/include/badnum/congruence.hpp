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

// Digit matrices g_a = [[0,1],[1,a]] acting on convergent matrices modulo
// n = i j. Appending digit a maps S = [[p_{k-1}, q_{k-1}], [p_k, q_k]] to
// g_a S. The search finds the shortest digit block (lexicographically least
// among those) after which p is divisible by j and q by i.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "badnum/cf.hpp"
#include "badnum/error.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

/// Largest modulus for which dense residue tables are built.
inline constexpr std::uint32_t kMaxModulus = 64;

/// [[a, b], [c, d]] over Z/nZ.
struct ResidueMatrix {
  std::uint32_t a = 0, b = 0, c = 0, d = 0;
  std::uint32_t n = 1;

  static ResidueMatrix of(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                          std::uint32_t n) {
    auto r = [n](std::int64_t v) {
      const std::int64_t m = v % static_cast<std::int64_t>(n);
      return static_cast<std::uint32_t>(m < 0 ? m + n : m);
    };
    return {r(a), r(b), r(c), r(d), n};
  }

  static ResidueMatrix identity(std::uint32_t n) { return of(1, 0, 0, 1, n); }

  static ResidueMatrix from_index(std::uint32_t idx, std::uint32_t n) {
    ResidueMatrix m;
    m.n = n;
    m.d = idx % n;
    idx /= n;
    m.c = idx % n;
    idx /= n;
    m.b = idx % n;
    m.a = idx / n;
    return m;
  }

  std::uint32_t index() const noexcept { return ((a * n + b) * n + c) * n + d; }

  /// ad - bc reduced to [0, n).
  std::uint32_t det() const noexcept {
    const std::uint64_t N = n;
    return static_cast<std::uint32_t>((std::uint64_t{a} * d % N + N - std::uint64_t{b} * c % N) % N);
  }

  bool is_unimodular() const noexcept {
    const std::uint32_t dt = det();
    return dt == 1 % n || dt == (n - 1) % n;
  }

  ResidueMatrix operator*(const ResidueMatrix& o) const {
    const std::uint64_t N = n;
    auto dot = [N](std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t w) {
      return static_cast<std::uint32_t>((x * y + z * w) % N);
    };
    return {dot(a, o.a, b, o.c), dot(a, o.b, b, o.d), dot(c, o.a, d, o.c), dot(c, o.b, d, o.d), n};
  }

  friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;
};

inline std::string to_string(const ResidueMatrix& m) {
  return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" + std::to_string(m.c) +
         "," + std::to_string(m.d) + "]] mod " + std::to_string(m.n);
}

inline void check_modulus(std::uint32_t n) {
  if (n < 1) throw DomainError("modulus must be >= 1");
  if (n > kMaxModulus)
    throw ResourceError("modulus " + std::to_string(n) + " exceeds the table limit " +
                        std::to_string(kMaxModulus));
}

/// [[0,1],[1,a]] mod n.
inline ResidueMatrix generator(Digit a, std::uint32_t n) {
  if (a < 1) throw DomainError("digit must be >= 1");
  return ResidueMatrix::of(0, 1, 1, a, n);
}

inline ResidueMatrix residue_of(const ConvergentState& s, std::uint32_t n) {
  auto r = [n](const BigInt& v) {
    BigInt m;
    mpz_fdiv_r_ui(m.get_mpz_t(), v.get_mpz_t(), n);
    return static_cast<std::int64_t>(m.get_ui());
  };
  return ResidueMatrix::of(r(s.p_prev), r(s.q_prev), r(s.p_cur), r(s.q_cur), n);
}

/// Least k >= 1 with g^k = 1. Exists because the group is finite.
inline std::size_t order(const ResidueMatrix& g) {
  const ResidueMatrix id = ResidueMatrix::identity(g.n);
  ResidueMatrix p = g;
  std::size_t k = 1;
  while (!(p == id)) {
    p = p * g;
    ++k;
    if (k > std::size_t{2} * g.n * g.n * g.n * g.n + 2)
      throw InternalError("element has no finite order: " + to_string(g));
  }
  return k;
}

/// g^(k-1) for the order k: the inverse, as a positive power of g.
inline ResidueMatrix semigroup_inverse(const ResidueMatrix& g) {
  const std::size_t k = order(g);
  ResidueMatrix p = ResidueMatrix::identity(g.n);
  for (std::size_t e = 1; e < k; ++e) p = p * g;
  return p;
}

/// |{ M in Mat_2(Z/nZ) : det M = +-1 }| by exhaustive enumeration.
inline std::size_t count_unimodular(std::uint32_t n) {
  check_modulus(n);
  std::size_t count = 0;
  const std::uint32_t total = n * n * n * n;
  for (std::uint32_t idx = 0; idx < total; ++idx)
    if (ResidueMatrix::from_index(idx, n).is_unimodular()) ++count;
  return count;
}

inline constexpr std::uint16_t kUnreached = std::numeric_limits<std::uint16_t>::max();

struct GroupClosure {
  std::uint32_t n = 1;
  Digit M = 2;
  std::size_t size = 0;         // elements reached
  std::uint16_t max_distance = 0;
  std::vector<std::uint16_t> distance;  // dense over all n^4 matrices

  std::uint16_t distance_of(const ResidueMatrix& m) const { return distance[m.index()]; }
  bool reached(const ResidueMatrix& m) const { return distance_of(m) != kUnreached; }
};

namespace detail {
inline Digit distinct_digits(Digit M, std::uint32_t n) { return std::min<Digit>(M, n); }
}  // namespace detail

/// Breadth-first search from the identity under X -> X g_a, 1 <= a <= M.
inline GroupClosure group_closure(std::uint32_t n, Digit M) {
  if (M < 2) throw DomainError("alphabet bound M must be >= 2");
  check_modulus(n);
  GroupClosure g;
  g.n = n;
  g.M = M;
  g.distance.assign(std::size_t{n} * n * n * n, kUnreached);
  const Digit digits = detail::distinct_digits(M, n);
  std::vector<ResidueMatrix> gens;
  for (Digit a = 1; a <= digits; ++a) gens.push_back(generator(a, n));
  std::deque<ResidueMatrix> frontier{ResidueMatrix::identity(n)};
  g.distance[frontier.front().index()] = 0;
  g.size = 1;
  while (!frontier.empty()) {
    const ResidueMatrix x = frontier.front();
    frontier.pop_front();
    const std::uint16_t dx = g.distance[x.index()];
    for (const auto& ga : gens) {
      const ResidueMatrix y = x * ga;
      auto& dy = g.distance[y.index()];
      if (dy != kUnreached) continue;
      dy = static_cast<std::uint16_t>(dx + 1);
      g.max_distance = std::max(g.max_distance, dy);
      ++g.size;
      frontier.push_back(y);
    }
  }
  return g;
}

struct SearchResult {
  std::vector<Digit> word;
  std::size_t length() const noexcept { return word.size(); }
};

/// Shortest digit blocks forcing j | p and i | q, for all start states in
/// SL+-(2, Z/ijZ) at once.
class CongruenceSearch {
 public:
  CongruenceSearch(const BigInt& i, const BigInt& j, Digit M) : M_(M) {
    if (i < 1 || j < 1) throw DomainError("i and j must be positive");
    if (gcd(i, j) != 1) throw DomainError("reduce the fraction: gcd(i, j) must be 1");
    if (M < 2) throw DomainError("alphabet bound M must be >= 2");
    const BigInt n = i * j;
    if (!n.fits_uint_p() || n.get_ui() > kMaxModulus)
      throw ResourceError("modulus i*j exceeds the table limit " + std::to_string(kMaxModulus));
    i_ = static_cast<std::uint32_t>(i.get_ui());
    j_ = static_cast<std::uint32_t>(j.get_ui());
    n_ = i_ * j_;
    build();
  }

  std::uint32_t i() const noexcept { return i_; }
  std::uint32_t j() const noexcept { return j_; }
  std::uint32_t modulus() const noexcept { return n_; }
  Digit alphabet() const noexcept { return M_; }

  /// max over all states of the least t >= 1 reaching the target.
  std::size_t T() const noexcept { return T_; }

  /// Bottom row (p, q) has j | p and i | q.
  bool in_target(const ResidueMatrix& m) const noexcept {
    return m.c % j_ == 0 && m.d % i_ == 0;
  }

  /// Least t >= 1 for start residue s.
  std::size_t steps_from(const ResidueMatrix& s) const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Digit a = 1; a <= digits(); ++a)
      best = std::min<std::size_t>(best, 1 + dist_[(generator(a, n_) * s).index()]);
    return best;
  }

  /// Shortest, then lexicographically least, block for a start state.
  SearchResult extend(const ConvergentState& s) const {
    ResidueMatrix cur = residue_of(s, n_);
    if (!cur.is_unimodular()) throw DomainError("convergent state is not unimodular");
    SearchResult out;
    std::uint16_t want = kUnreached;
    Digit pick = 0;
    for (Digit a = 1; a <= digits(); ++a) {
      const std::uint16_t da = dist_[(generator(a, n_) * cur).index()];
      if (da < want) {
        want = da;
        pick = a;
      }
    }
    if (want == kUnreached) throw InternalError("target unreachable from " + to_string(cur));
    out.word.push_back(pick);
    cur = generator(pick, n_) * cur;
    while (dist_[cur.index()] > 0) {
      const std::uint16_t next = static_cast<std::uint16_t>(dist_[cur.index()] - 1);
      Digit a = 1;
      while (dist_[(generator(a, n_) * cur).index()] != next) ++a;
      out.word.push_back(a);
      cur = generator(a, n_) * cur;
    }
    ConvergentState replay = s;
    for (Digit a : out.word) advance(replay, a);
    if (replay.p_cur < 1 || replay.p_cur % j_ != 0 || replay.q_cur % i_ != 0)
      throw InternalError("extension failed to reach the target class");
    return out;
  }

 private:
  Digit digits() const noexcept { return detail::distinct_digits(M_, n_); }

  void build() {
    const std::uint32_t total = n_ * n_ * n_ * n_;
    dist_.assign(total, kUnreached);
    // Reverse BFS from the target class: predecessors of Y under digit a
    // are g_a^{-1} Y = [[-a y11 + y21, -a y12 + y22], [y11, y12]].
    std::deque<std::uint32_t> frontier;
    std::vector<std::uint32_t> group;
    for (std::uint32_t idx = 0; idx < total; ++idx) {
      const ResidueMatrix m = ResidueMatrix::from_index(idx, n_);
      if (!m.is_unimodular()) continue;
      group.push_back(idx);
      if (in_target(m)) {
        dist_[idx] = 0;
        frontier.push_back(idx);
      }
    }
    while (!frontier.empty()) {
      const ResidueMatrix y = ResidueMatrix::from_index(frontier.front(), n_);
      const std::uint16_t dy = dist_[frontier.front()];
      frontier.pop_front();
      for (Digit a = 1; a <= digits(); ++a) {
        const std::int64_t aa = a;
        const ResidueMatrix x = ResidueMatrix::of(-aa * y.a + y.c, -aa * y.b + y.d, y.a, y.b, n_);
        auto& dx = dist_[x.index()];
        if (dx != kUnreached) continue;
        dx = static_cast<std::uint16_t>(dy + 1);
        frontier.push_back(x.index());
      }
    }
    T_ = 0;
    for (std::uint32_t idx : group) {
      const std::size_t t = steps_from(ResidueMatrix::from_index(idx, n_));
      if (t >= kUnreached)
        throw InternalError("digit matrices do not generate SL+-(2, Z/" + std::to_string(n_) +
                            "Z)");
      T_ = std::max(T_, t);
    }
  }

  std::uint32_t i_ = 1, j_ = 1, n_ = 1;
  Digit M_ = 2;
  std::size_t T_ = 0;
  std::vector<std::uint16_t> dist_;
};

inline std::size_t T_bound(const BigInt& i, const BigInt& j, Digit M) {
  return CongruenceSearch(i, j, M).T();
}

inline SearchResult extend_to_congruence(const ConvergentState& s, const BigInt& i,
                                         const BigInt& j, Digit M) {
  return CongruenceSearch(i, j, M).extend(s);
}

struct IdentityCheck {
  std::string name;
  ResidueMatrix expected;
  ResidueMatrix product;
  bool pass = false;
};

/// The three products showing [[1,1],[0,1]], [[1,0],[1,1]] and [[0,1],[-1,0]]
/// lie in the semigroup generated by the g_a. Inverses are taken as
/// positive powers, as the finiteness argument allows.
inline std::vector<IdentityCheck> sl2_generator_identities_check(std::uint32_t n) {
  if (n < 2) throw DomainError("identity check needs n >= 2");
  check_modulus(n);
  const ResidueMatrix g1 = generator(1, n), g2 = generator(2, n);
  const ResidueMatrix g1_inv = semigroup_inverse(g1);
  std::vector<IdentityCheck> out;
  auto add = [&](std::string name, ResidueMatrix expected, ResidueMatrix product) {
    out.push_back({std::move(name), expected, product, expected == product});
  };
  const ResidueMatrix upper = g1_inv * g2;
  const ResidueMatrix lower = g2 * g1_inv;
  add("[[1,1],[0,1]] = g_1^-1 g_2", ResidueMatrix::of(1, 1, 0, 1, n), upper);
  add("[[1,0],[1,1]] = g_2 g_1^-1", ResidueMatrix::of(1, 0, 1, 1, n), lower);
  add("[[0,1],[-1,0]] = U L^-1 U", ResidueMatrix::of(0, 1, -1, 0, n),
      upper * semigroup_inverse(lower) * upper);
  // The displayed form of g_1^-1 itself.
  add("g_1^-1 = [[-1,1],[1,0]]", ResidueMatrix::of(-1, 1, 1, 0, n), g1_inv);
  return out;
}

}  // namespace badnum
