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

// Finite-scale estimates of the Lagrange constant
//   L(x) = liminf_q q^(1/d) dist(q x, Z^d)
// in the max norm, and the multiplication bound L((i/j)x) >= L(x)/(i^(1/d) j).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "badnum/cf.hpp"
#include "badnum/error.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

/// A reduced positive fraction i/j.
struct Multiplier {
  BigInt i{1};
  BigInt j{1};

  Multiplier() = default;
  Multiplier(BigInt i_, BigInt j_) : i(std::move(i_)), j(std::move(j_)) {
    if (i < 1 || j < 1) throw DomainError("multiplier entries must be positive");
    if (gcd(i, j) != 1) throw DomainError("reduce the fraction " + i.get_str() + "/" + j.get_str());
  }

  BigRat value() const { return make_rat(i, j); }
  friend bool operator==(const Multiplier&, const Multiplier&) = default;
};

/// A lazily evaluated sequence (i_k/j_k, g(k)), k = 1, 2, ...
///
/// The weight is carried as g(k)^2 so that weights such as 2^(k/2) stay
/// exact. Extraction of subsequences assumes g is nondecreasing.
struct DecaySchedule {
  std::function<Multiplier(const BigInt& k)> fraction;
  std::function<BigRat(const BigInt& k)> weight_squared;
  std::optional<std::size_t> length;  // nullopt: infinite
  std::string description;

  /// i_k/j_k = k, g(k) = k.
  static DecaySchedule linear() {
    return {[](const BigInt& k) { return Multiplier(k, 1); },
            [](const BigInt& k) { return BigRat(k * k); }, std::nullopt,
            "fractions=k,g=k"};
  }

  /// i_k/j_k = (i/j)^k with the given g^2.
  static DecaySchedule powers(const Multiplier& base,
                              std::function<BigRat(const BigInt&)> weight_squared,
                              std::string weight_name) {
    return {[base](const BigInt& k) {
              if (!k.fits_ulong_p()) throw ResourceError("power index too large");
              return Multiplier(pow_int(base.i, k.get_ui()), pow_int(base.j, k.get_ui()));
            },
            std::move(weight_squared), std::nullopt,
            "fractions=(" + base.i.get_str() + "/" + base.j.get_str() + ")^k,g=" +
                weight_name};
  }

  /// A finite explicit list (fractions must be distinct).
  static DecaySchedule explicit_list(std::vector<Multiplier> fractions,
                                     std::vector<BigRat> weights) {
    if (fractions.size() != weights.size())
      throw DomainError("schedule needs one weight per fraction");
    for (std::size_t a = 0; a < fractions.size(); ++a)
      for (std::size_t b = a + 1; b < fractions.size(); ++b)
        if (fractions[a] == fractions[b]) throw DomainError("schedule fractions must be distinct");
    const std::size_t n = fractions.size();
    auto index = [n](const BigInt& k) {
      if (k < 1 || k > n) throw DomainError("schedule index out of range");
      return static_cast<std::size_t>(k.get_ui() - 1);
    };
    return {[fractions, index](const BigInt& k) { return fractions[index(k)]; },
            [weights, index](const BigInt& k) {
              return BigRat(weights[index(k)] * weights[index(k)]);
            },
            n, "explicit"};
  }
};

/// g(k)^2 for common weights.
namespace weights {
inline std::function<BigRat(const BigInt&)> linear() {
  return [](const BigInt& k) { return BigRat(k * k); };
}
inline std::function<BigRat(const BigInt&)> constant(BigRat c) {
  return [c](const BigInt&) { return BigRat(c * c); };
}
/// g(k) = base^k.
inline std::function<BigRat(const BigInt&)> power(BigRat base) {
  return [base](const BigInt& k) {
    if (!k.fits_slong_p()) throw ResourceError("weight index too large");
    return pow_rat(base, 2 * k.get_si());
  };
}
/// g(k) = base^(k/2).
inline std::function<BigRat(const BigInt&)> sqrt_power(BigRat base) {
  return [base](const BigInt& k) {
    if (!k.fits_slong_p()) throw ResourceError("weight index too large");
    return pow_rat(base, k.get_si());
  };
}
}  // namespace weights

struct LagrangeEstimate {
  /// Exact when `exact`; otherwise a rational lower bound accurate to
  /// about 50 decimal digits.
  BigRat value;
  bool exact = true;
  /// Convergent indices inspected (lagrange_cf only).
  std::size_t window_start = 0;
  std::size_t window_end = 0;
  /// Denominators inspected.
  BigInt q_min{1};
  BigInt q_max{1};
  /// Smallest q attaining the minimum.
  BigInt argmin_q{1};
  /// Largest change of an inspected value under any continuation of the
  /// word (lagrange_cf with a tail guard only).
  BigRat tail_uncertainty{0};
};

struct CfWindow {
  /// First inspected index is ceil(start_fraction * len), at least 1.
  BigRat start_fraction{1, 2};
  /// Indices whose value could move by more than this if the word were
  /// continued are excluded from the window end. nullopt treats the word as
  /// the exact rational it spells and inspects through len - 1.
  std::optional<BigRat> tail_tolerance = BigRat(1, 10'000'000'000);

  static CfWindow exact(BigRat start_fraction) { return {std::move(start_fraction), std::nullopt}; }
};

namespace detail {

// q |q x - p| for x = num/den.
inline BigRat scaled_error(const BigInt& p, const BigInt& q, const BigInt& num,
                           const BigInt& den) {
  BigInt diff = q * num - p * den;
  if (diff < 0) diff = -diff;
  return make_rat(BigInt(q * diff), den);
}

}  // namespace detail

/// Windowed minimum of q_n |q_n x - p_n| over convergent indices, x the
/// rational spelled by w (d = 1).
inline LagrangeEstimate lagrange_cf(const CFWord& w, const CfWindow& window = {}) {
  const std::size_t n_digits = w.size();
  if (n_digits < 4) throw DomainError("lagrange_cf needs a word of length >= 4");
  if (window.start_fraction < 0 || window.start_fraction >= 1)
    throw DomainError("window start fraction must lie in [0, 1)");
  const auto conv = convergent_list(w);
  const BigInt& num = conv.back().p;
  const BigInt& den = conv.back().q;
  // Continuations [.., a_N + t], t in (0, 1]: the extreme t = 1 adds the
  // previous convergent.
  const BigInt num_alt = num + conv[n_digits - 2].p;
  const BigInt den_alt = den + conv[n_digits - 2].q;

  LagrangeEstimate est;
  const BigInt start_big = ceil_of(window.start_fraction * BigRat(static_cast<unsigned long>(n_digits)));
  est.window_start = std::max<std::size_t>(1, start_big.get_ui());
  std::size_t end = n_digits - 1;
  if (window.tail_tolerance) {
    std::size_t last_good = 0;
    for (std::size_t n = est.window_start; n <= n_digits - 1; ++n) {
      const auto& c = conv[n - 1];
      BigRat u = detail::scaled_error(c.p, c.q, num, den) -
                 detail::scaled_error(c.p, c.q, num_alt, den_alt);
      u = abs(u);
      if (u > *window.tail_tolerance) break;
      if (u > est.tail_uncertainty) est.tail_uncertainty = u;
      last_good = n;
    }
    end = last_good;
  }
  if (end < est.window_start)
    throw DomainError("empty window: word of length " + std::to_string(n_digits) +
                      " is too short for the requested window");
  est.window_end = end;
  bool first = true;
  for (std::size_t n = est.window_start; n <= end; ++n) {
    const auto& c = conv[n - 1];
    BigRat v = detail::scaled_error(c.p, c.q, num, den);
    if (first || v < est.value) {
      est.value = v;
      est.argmin_q = c.q;
      first = false;
    }
  }
  est.q_min = conv[est.window_start - 1].q;
  est.q_max = conv[end - 1].q;
  est.exact = true;
  return est;
}

namespace detail {

inline LagrangeEstimate direct_1d(const BigRat& x, std::uint64_t q_min, std::uint64_t q_max) {
  LagrangeEstimate est;
  est.q_min = static_cast<unsigned long>(q_min);
  est.q_max = static_cast<unsigned long>(q_max);
  const BigInt& den = x.get_den();
  BigInt step;
  mpz_fdiv_r(step.get_mpz_t(), x.get_num_mpz_t(), den.get_mpz_t());
  BigInt residue = BigInt(static_cast<unsigned long>(q_min)) * step;
  mpz_fdiv_r(residue.get_mpz_t(), residue.get_mpz_t(), den.get_mpz_t());

  std::uint64_t best_q = q_min;
  if (den.fits_ulong_p() && den.get_ui() < (1ULL << 62)) {
    using u128 = unsigned __int128;
    const std::uint64_t D = den.get_ui();
    const std::uint64_t S = step.get_ui();
    std::uint64_t r = residue.get_ui();
    u128 best = ~static_cast<u128>(0);
    for (std::uint64_t q = q_min;; ++q) {
      const std::uint64_t m = std::min(r, D - r);
      const u128 score = static_cast<u128>(q) * m;
      if (score < best) {
        best = score;
        best_q = q;
        if (score == 0) break;
      }
      if (q == q_max) break;
      r += S;
      if (r >= D) r -= D;
    }
    BigInt m = BigInt(static_cast<unsigned long>(best_q)) * step;
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), den.get_mpz_t());
    if (2 * m > den) m = den - m;
    est.value = make_rat(BigInt(BigInt(static_cast<unsigned long>(best_q)) * m), den);
  } else {
    BigInt best, score, m;
    bool first = true;
    for (std::uint64_t q = q_min;; ++q) {
      m = den - residue;
      if (residue < m) m = residue;
      score = m;
      score *= static_cast<unsigned long>(q);
      if (first || score < best) {
        best = score;
        best_q = q;
        first = false;
        if (score == 0) break;
      }
      if (q == q_max) break;
      residue += step;
      if (residue >= den) residue -= den;
    }
    est.value = make_rat(best, den);
  }
  est.argmin_q = static_cast<unsigned long>(best_q);
  est.exact = true;
  return est;
}

}  // namespace detail

/// min over q_min <= q <= q_max of q^(1/d) dist_inf(q x, Z^d).
///
/// Exact for d = 1. For d >= 2 the root is rounded down, so the reported
/// value is a lower bound on the true minimum.
inline LagrangeEstimate lagrange_direct(const std::vector<BigRat>& x, std::uint64_t q_max,
                                        std::uint64_t q_min = 1) {
  if (x.empty()) throw DomainError("lagrange_direct needs dimension d >= 1");
  if (q_max < 1) throw DomainError("q_max must be >= 1");
  if (q_min < 1 || q_min > q_max) throw DomainError("need 1 <= q_min <= q_max");
  if (x.size() == 1) return detail::direct_1d(x[0], q_min, q_max);

  const unsigned long d = x.size();
  LagrangeEstimate est;
  est.exact = false;
  est.q_min = static_cast<unsigned long>(q_min);
  est.q_max = static_cast<unsigned long>(q_max);
  std::vector<BigInt> residue(d), step(d);
  for (std::size_t c = 0; c < d; ++c) {
    mpz_fdiv_r(step[c].get_mpz_t(), x[c].get_num_mpz_t(), x[c].get_den_mpz_t());
    residue[c] = BigInt(static_cast<unsigned long>(q_min)) * step[c];
    mpz_fdiv_r(residue[c].get_mpz_t(), residue[c].get_mpz_t(), x[c].get_den_mpz_t());
  }
  bool first = true;
  for (std::uint64_t q = q_min;; ++q) {
    BigRat dist(0);
    for (std::size_t c = 0; c < d; ++c) {
      const BigInt& den = x[c].get_den();
      BigInt m = den - residue[c];
      if (residue[c] < m) m = residue[c];
      BigRat coord = make_rat(m, den);
      if (coord > dist) dist = coord;
    }
    BigRat v = dist == 0 ? BigRat(0)
                         : BigRat(root_lower_bound(BigInt(static_cast<unsigned long>(q)), d) * dist);
    if (first || v < est.value) {
      est.value = v;
      est.argmin_q = static_cast<unsigned long>(q);
      first = false;
      if (v == 0) break;
    }
    if (q == q_max) break;
    for (std::size_t c = 0; c < d; ++c) {
      residue[c] += step[c];
      if (residue[c] >= x[c].get_den()) residue[c] -= x[c].get_den();
    }
  }
  return est;
}

struct CrudeBoundReport {
  Multiplier m;
  LagrangeEstimate of_x;   // scale i * q_max
  LagrangeEstimate of_mx;  // scale q_max
  BigRat bound;            // of_x.value / (i j)
  BigRat margin;           // of_mx.value - bound
  BigRat tolerance;
  bool holds = true;
};

/// Checks L((i/j)x) >= L(x)/(i j) at finite scale (d = 1).
///
/// Every q <= q_max for (i/j)x is matched by the denominator i q for x, so
/// x is estimated up to i * q_max. With that pairing the finite inequality
/// always holds, and a reported failure indicates a defect.
inline CrudeBoundReport check_crude_bound(const CFWord& x, const Multiplier& m,
                                          std::uint64_t q_max,
                                          const BigRat& tolerance = BigRat(1, 1'000'000'000)) {
  if (!m.i.fits_ulong_p() || m.i.get_ui() > (1ULL << 20))
    throw ResourceError("multiplier numerator too large for a direct scan");
  const BigRat value = evaluate(x);
  CrudeBoundReport r;
  r.m = m;
  r.tolerance = tolerance;
  r.of_x = lagrange_direct({value}, q_max * m.i.get_ui());
  r.of_mx = lagrange_direct({BigRat(m.value() * value)}, q_max);
  r.bound = r.of_x.value / BigRat(m.i * m.j);
  r.margin = r.of_mx.value - r.bound;
  r.holds = r.margin >= -tolerance;
  return r;
}

struct DecayRow {
  std::size_t k = 0;
  Multiplier m;
  LagrangeEstimate estimate;
  BigRat weight;           // g(k), rounded toward zero when irrational
  BigRat weighted_value;   // g(k) * L_hat
};

/// Default lower end of the q range used by decay_table: ceil(sqrt(q_max)).
inline std::uint64_t default_decay_q_min(std::uint64_t q_max) {
  return ceil_root(BigInt(static_cast<unsigned long>(q_max)), 2).get_ui();
}

/// One row per schedule entry k = 1..rows (bounded by the schedule length):
/// L_hat((i_k/j_k) x) over q in [q_min, q_max], and g(k) L_hat.
inline std::vector<DecayRow> decay_table(const CFWord& x, const DecaySchedule& s,
                                         std::size_t rows, std::uint64_t q_max,
                                         std::optional<std::uint64_t> q_min = std::nullopt) {
  const BigRat value = evaluate(x);
  if (value <= 0 || value >= 1) throw DomainError("decay_table needs x in (0,1)");
  if (s.length) rows = std::min(rows, *s.length);
  const std::uint64_t lo = q_min.value_or(default_decay_q_min(q_max));
  auto row = [&](std::size_t k) {
    DecayRow r;
    r.k = k;
    const BigInt kk(static_cast<unsigned long>(k));
    r.m = s.fraction(kk);
    r.estimate = lagrange_direct({BigRat(r.m.value() * value)}, q_max, lo);
    const BigRat g2 = s.weight_squared(kk);
    const BigInt num_root = floor_root(g2.get_num(), 2);
    const BigInt den_root = floor_root(g2.get_den(), 2);
    r.weight = (num_root * num_root == g2.get_num() && den_root * den_root == g2.get_den())
                   ? make_rat(num_root, den_root)
                   : sqrt_approx(g2);
    r.weighted_value = r.weight * r.estimate.value;
    return r;
  };
  // Rows are independent; evaluate them concurrently in index order.
  std::vector<DecayRow> out(rows);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(
      rows, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 0; w < workers; ++w)
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < rows; k += workers) out[k] = row(k + 1);
    }));
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace badnum
