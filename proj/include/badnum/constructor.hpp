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

// Explicit decaying badly approximable numbers: a digit stream over
// {1..M} that, for each scheduled i/j in turn, forces a convergent with
// j | p and i | q. Each such convergent satisfies
//   q^2 i j |(i/j) x - p/q| <= 1   (p = p_k / j, q = q_k / i).

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "badnum/cf.hpp"
#include "badnum/congruence.hpp"
#include "badnum/lagrange.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

/// Round r lists every reduced i/j with 1 <= i, j <= r, ordered by (i+j, i).
/// Rounds run 1, 2, ..., max_round and then repeat max_round forever; with
/// no max_round the rounds grow without bound.
class FractionSchedule {
 public:
  explicit FractionSchedule(std::optional<unsigned> max_round = std::nullopt)
      : max_round_(max_round) {
    if (max_round_ && *max_round_ < 1) throw DomainError("max_round must be >= 1");
  }

  static std::vector<Multiplier> round(unsigned r) {
    std::vector<std::pair<unsigned, unsigned>> f;
    for (unsigned i = 1; i <= r; ++i)
      for (unsigned j = 1; j <= r; ++j)
        if (std::gcd(i, j) == 1) f.emplace_back(i, j);
    std::sort(f.begin(), f.end(), [](const auto& u, const auto& v) {
      const unsigned su = u.first + u.second, sv = v.first + v.second;
      return su != sv ? su < sv : u.first < v.first;
    });
    std::vector<Multiplier> out;
    for (auto [i, j] : f) out.emplace_back(BigInt(i), BigInt(j));
    return out;
  }

  Multiplier next() {
    if (pos_ >= current_.size()) {
      if (!max_round_ || round_ < *max_round_) ++round_;
      current_ = round(round_);
      pos_ = 0;
    }
    return current_[pos_++];
  }

  std::optional<unsigned> max_round() const noexcept { return max_round_; }

 private:
  std::optional<unsigned> max_round_;
  unsigned round_ = 0;
  std::vector<Multiplier> current_;
  std::size_t pos_ = 0;
};

struct LogEntry {
  Multiplier m;
  std::size_t k = 0;          // convergent index with j | p_k and i | q_k
  std::vector<Digit> block;   // search word followed by padding
  std::size_t t = 0;          // search word length
  std::size_t padding = 0;
};

using ConstructionLog = std::vector<LogEntry>;

struct Construction {
  CFWord word;
  ConstructionLog log;
};

struct BuildOptions {
  /// Pad each block with 1s up to T(i, j, M).
  bool pad_to_T = true;
};

/// Caches one CongruenceSearch per fraction.
class SearchCache {
 public:
  explicit SearchCache(Digit M) : M_(M) {}

  const CongruenceSearch& get(const Multiplier& m) {
    const auto key = std::make_pair(m.i.get_str(), m.j.get_str());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, CongruenceSearch(m.i, m.j, M_)).first;
    return it->second;
  }

  Digit alphabet() const noexcept { return M_; }

 private:
  Digit M_;
  std::map<std::pair<std::string, std::string>, CongruenceSearch> cache_;
};

inline Construction build_decaying(Digit M, std::size_t depth, FractionSchedule schedule,
                                   const BuildOptions& options = {}) {
  if (M < 2) throw DomainError("alphabet bound M must be >= 2");
  if (depth < 1) throw DomainError("depth must be >= 1");
  SearchCache searches(M);
  Construction out;
  std::vector<Digit> digits;
  ConvergentState s = initial_state();
  while (digits.size() < depth) {
    const Multiplier m = schedule.next();
    const CongruenceSearch& search = searches.get(m);
    LogEntry e;
    e.m = m;
    e.block = search.extend(s).word;
    e.t = e.block.size();
    for (Digit a : e.block) advance(s, a);
    e.k = s.index;
    if (options.pad_to_T) {
      e.padding = search.T() - e.t;
      for (std::size_t z = 0; z < e.padding; ++z) {
        e.block.push_back(1);
        advance(s, 1);
      }
    }
    digits.insert(digits.end(), e.block.begin(), e.block.end());
    out.log.push_back(std::move(e));
  }
  out.word = CFWord(std::move(digits));
  return out;
}

struct QualifyingConvergent {
  std::size_t k = 0;
  BigInt p_k, q_k;
  BigRat error;   // |x - p_k/q_k|
  BigRat ratio;   // q^2 i j |(i/j) x - p/q|
  bool chain_holds = false;
};

struct DecayReport {
  Multiplier m;
  std::vector<QualifyingConvergent> convergents;  // last convergent excluded
  bool all_hold = true;
  std::optional<BigRat> max_ratio;
  std::optional<BigRat> min_ratio;

  std::size_t count() const noexcept { return convergents.size(); }
  bool none_found() const noexcept { return convergents.empty(); }
};

/// Checks, exactly, for every convergent p_k/q_k with j | p_k and i | q_k
/// (except the last):
///   |x - p_k/q_k| <= 1/(q_{k+1} q_k) <= 1/(i^2 q^2)  and
///   |(i/j) x - p/q| <= 1/(i j q^2).
inline DecayReport verify_decaying(const CFWord& w, const Multiplier& m) {
  DecayReport r;
  r.m = m;
  const auto conv = convergent_list(w);
  if (conv.empty()) return r;
  const BigRat x = conv.back().value();
  const BigRat mult = m.value();
  const BigRat ij(BigInt(m.i * m.j));
  for (std::size_t idx = 0; idx + 1 < conv.size(); ++idx) {
    const auto& c = conv[idx];
    if (c.p < 1 || c.p % m.j != 0 || c.q % m.i != 0) continue;
    QualifyingConvergent qc;
    qc.k = idx + 1;
    qc.p_k = c.p;
    qc.q_k = c.q;
    const BigInt p = c.p / m.j;
    const BigInt q = c.q / m.i;
    qc.error = abs(x - make_rat(c.p, c.q));
    const BigRat consecutive = make_rat(1, BigInt(conv[idx + 1].q * c.q));
    const BigRat square = make_rat(1, BigInt(m.i * m.i * q * q));
    const BigRat scaled_error = abs(mult * x - make_rat(p, q));
    qc.ratio = BigRat(q * q) * ij * scaled_error;
    qc.chain_holds = qc.error <= consecutive && consecutive <= square &&
                     scaled_error <= make_rat(1, BigInt(m.i * m.j * q * q));
    r.all_hold = r.all_hold && qc.chain_holds && qc.ratio <= 1;
    if (!r.max_ratio || qc.ratio > *r.max_ratio) r.max_ratio = qc.ratio;
    if (!r.min_ratio || qc.ratio < *r.min_ratio) r.min_ratio = qc.ratio;
    r.convergents.push_back(std::move(qc));
  }
  return r;
}

struct GoodApproximation {
  BigRat convergent;
  BigRat quality;  // q^2 |x - p/q|
};

/// Every convergent with its quality q^2 |x - p/q|; all are < 1.
inline std::vector<GoodApproximation> good_approximations(const CFWord& w) {
  if (w.empty()) throw DomainError("empty expansion");
  std::vector<GoodApproximation> out;
  const auto conv = convergent_list(w);
  const BigRat x = conv.back().value();
  for (const auto& c : conv) {
    BigRat v = c.value();
    out.push_back({v, BigRat(BigRat(c.q * c.q) * abs(x - v))});
  }
  return out;
}

}  // namespace badnum
