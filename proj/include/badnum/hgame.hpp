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

// The hyperplane absolute game with parameter 0 < beta < 1/3.
//
// Bob opens with B_0. On turn l Alice deletes a hyperplane neighborhood of
// thickness at most beta rho_l; Bob answers with B_{l+1} inside
// B_l minus that neighborhood, of radius exactly beta rho_l.
//
// Alice's multiplier strategy spends the turns l = 2^(k-1) (1 + 2m) on
// the k-th multiplier i/j, deleting the common hyperplane of the points
// j p/(i q) in 2 B_l with q < Q_m = (4 d! (i/j) beta^l rho_0)^(-d/(d+1)).

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "badnum/error.hpp"
#include "badnum/farey.hpp"
#include "badnum/geometry.hpp"
#include "badnum/lagrange.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

struct HGameConfig {
  BigRat beta{1, 4};
  Ball initial;
  DecaySchedule schedule = DecaySchedule::linear();
  std::size_t rounds = 40;
  /// Put 1/1 first, with the smallest weight the strategy accepts.
  bool prepend_unit = false;

  std::size_t dim() const noexcept { return initial.dim(); }

  void validate() const {
    if (beta <= 0 || beta >= BigRat(1, 3)) throw DomainError("beta must lie in (0, 1/3)");
    if (initial.dim() == 0) throw DomainError("initial ball missing");
    if (rounds < 1) throw DomainError("round budget must be >= 1");
  }

  /// rho_l = beta^l rho_0.
  BigRat radius_at(std::size_t l) const {
    return pow_rat(beta, static_cast<long>(l)) * initial.radius;
  }
};

/// l = 2^(k-1) + 2^k m, k >= 1, m >= 0.
struct TurnAssignment {
  std::size_t k = 1;
  std::size_t m = 0;

  static TurnAssignment of(std::size_t l) {
    if (l == 0) throw DomainError("turn 0 belongs to no progression");
    TurnAssignment t;
    t.k = static_cast<std::size_t>(__builtin_ctzll(l)) + 1;
    t.m = l >> t.k;
    return t;
  }

  std::size_t turn() const noexcept { return (std::size_t{1} << (k - 1)) + (m << k); }
};

struct SelectedMultiplier {
  std::size_t k = 0;        // position in the extracted subsequence
  BigInt source_index;      // index in the caller's schedule
  Multiplier m;
  BigRat weight_squared;    // g^2; epsilon_k = g^(-1/2)
};

namespace detail {

// (4 d! / beta^(2^k+1))^4: the least g^2 with beta^(2^k+1)/(4 d!) >= g^(-1/2).
inline BigRat required_weight_squared(const BigRat& beta, std::size_t d, std::size_t k) {
  if (k >= 62) throw ResourceError("progression index too large");
  const BigRat r = BigRat(4 * factorial(d)) / pow_rat(beta, static_cast<long>((1L << k) + 1));
  return pow_rat(r, 4);
}

}  // namespace detail

/// Greedy subsequence extraction: the k-th pick is the least source index
/// after the previous pick whose weight meets the k-th requirement. Uses a
/// galloping search, which assumes g is nondecreasing.
inline std::vector<SelectedMultiplier> extract_subsequence(const HGameConfig& cfg,
                                                           std::size_t k_max) {
  std::vector<SelectedMultiplier> out;
  BigInt prev(0);
  std::size_t k = 1;
  if (cfg.prepend_unit && k_max >= 1) {
    out.push_back({1, BigInt(0), Multiplier(1, 1), detail::required_weight_squared(cfg.beta, cfg.dim(), 1)});
    k = 2;
  }
  const auto& s = cfg.schedule;
  auto in_range = [&](const BigInt& idx) { return !s.length || idx <= *s.length; };
  for (; k <= k_max; ++k) {
    const BigRat need = detail::required_weight_squared(cfg.beta, cfg.dim(), k);
    auto ok = [&](const BigInt& idx) { return s.weight_squared(idx) >= need; };
    BigInt lo = prev + 1;
    if (!in_range(lo)) throw DomainError("schedule exhausted during subsequence extraction");
    BigInt pick;
    if (ok(lo)) {
      pick = lo;
    } else {
      BigInt bad = lo, step(1), hi;
      while (true) {
        hi = bad + step;
        if (!in_range(hi)) {
          hi = *s.length;
          if (!ok(hi)) throw DomainError("schedule exhausted during subsequence extraction");
          break;
        }
        if (ok(hi)) break;
        bad = hi;
        step *= 2;
        if (mpz_sizeinbase(step.get_mpz_t(), 2) > 4096)
          throw DomainError("schedule weight never reaches the required size");
      }
      while (hi - bad > 1) {
        BigInt mid = (bad + hi) / 2;
        if (ok(mid)) hi = mid;
        else bad = mid;
      }
      pick = hi;
    }
    out.push_back({k, pick, s.fraction(pick), s.weight_squared(pick)});
    prev = pick;
  }
  return out;
}

/// Largest k with a turn l in [1, rounds - 1].
inline std::size_t progressions_in_budget(std::size_t rounds) {
  if (rounds < 2) return 0;
  std::size_t k = 0;
  while ((std::size_t{1} << k) <= rounds - 1) ++k;
  return k;
}

/// Integer denominators q with Q_{m-1} <= q < Q_m for a multiplier played at
/// turn l (Q_{m-1} belongs to turn l - 2^k). Empty when hi < lo.
struct DenominatorWindow {
  BigInt lo;
  BigInt hi;
  bool empty() const { return hi < lo; }
};

namespace detail {

// S^(-d) with S = 4 d! (i/j) beta^l rho_0, so that Q^(d+1) = S^(-d).
inline BigRat window_power(const HGameConfig& cfg, const Multiplier& m, long l) {
  const std::size_t d = cfg.dim();
  const BigRat S = BigRat(4 * factorial(d)) * m.value() * pow_rat(cfg.beta, l) * cfg.initial.radius;
  return pow_rat(S, -static_cast<long>(d));
}

}  // namespace detail

inline DenominatorWindow denominator_window(const HGameConfig& cfg, const SelectedMultiplier& sel,
                                            std::size_t l) {
  const std::size_t d = cfg.dim();
  const long step = 1L << sel.k;
  DenominatorWindow w;
  w.lo = ceil_root(detail::window_power(cfg, sel.m, static_cast<long>(l) - step), d + 1);
  if (w.lo < 1) w.lo = 1;
  w.hi = ceil_root(detail::window_power(cfg, sel.m, static_cast<long>(l)), d + 1) - 1;
  return w;
}

struct AliceMove {
  HyperplaneNeighborhood neighborhood;
  bool vacuous = true;                // no rational needed deleting
  std::optional<std::size_t> k;       // progression served
  std::optional<std::size_t> m;
  std::size_t blocked_points = 0;
};

struct Position {
  const HGameConfig& config;
  std::size_t round;     // l: Bob's current ball is B_l
  const Ball& current;
};

using AliceStrategy = std::function<AliceMove(const Position&)>;
using BobStrategy = std::function<Ball(const Position&, const HyperplaneNeighborhood&)>;

/// The move that deletes nothing of interest: a boundary hyperplane.
inline AliceMove vacuous_move(const Position& pos) {
  AliceMove mv;
  const BigRat rho = pos.current.radius;
  mv.neighborhood = HyperplaneNeighborhood(
      Hyperplane::axis(pos.current.dim(), 0, BigRat(pos.current.center[0] + rho)),
      pos.config.beta * rho);
  return mv;
}

/// Alice's strategy for the set of x with limsup g(k) L((i_k/j_k) x) = inf.
class MultiplierAlice {
 public:
  explicit MultiplierAlice(const HGameConfig& cfg)
      : selection_(extract_subsequence(cfg, progressions_in_budget(cfg.rounds))) {
    cfg.validate();
  }

  const std::vector<SelectedMultiplier>& selection() const noexcept { return selection_; }

  AliceMove operator()(const Position& pos) const {
    if (pos.round == 0) return vacuous_move(pos);
    const TurnAssignment turn = TurnAssignment::of(pos.round);
    if (turn.k > selection_.size()) return vacuous_move(pos);
    const SelectedMultiplier& sel = selection_[turn.k - 1];
    const BigRat thickness = pos.config.radius_at(pos.round + 1);
    // Points p/q in (i/j) 2B_l with q below the simplex bound share one
    // hyperplane; its preimage under x -> (i/j) x holds j p/(i q).
    const Ball scaled = pos.current.inflated(2).scaled(sel.m.value());
    const SimplexCheck check = verify_simplex(scaled);
    if (check.kind == SimplexCheck::Kind::violation)
      throw InternalError("simplex lemma violated in alice move at turn " +
                          std::to_string(pos.round));
    AliceMove mv;
    mv.k = turn.k;
    mv.m = turn.m;
    if (check.kind == SimplexCheck::Kind::empty) {
      AliceMove v = vacuous_move(pos);
      v.k = turn.k;
      v.m = turn.m;
      return v;
    }
    mv.vacuous = false;
    mv.blocked_points = check.points.size();
    mv.neighborhood = HyperplaneNeighborhood(check.plane->scaled(BigRat(1) / sel.m.value()), thickness);
    return mv;
  }

 private:
  std::vector<SelectedMultiplier> selection_;
};

struct MoveRejection {
  enum class Reason { dimension, radius, containment, intersection, thickness };
  Reason reason;
  std::string detail;
};

inline std::string to_string(MoveRejection::Reason r) {
  switch (r) {
    case MoveRejection::Reason::dimension: return "dimension";
    case MoveRejection::Reason::radius: return "radius";
    case MoveRejection::Reason::containment: return "containment";
    case MoveRejection::Reason::intersection: return "intersection";
    case MoveRejection::Reason::thickness: return "thickness";
  }
  return "unknown";
}

/// Legality of Bob's answer `next` to Alice's neighborhood inside `prev`.
inline std::optional<MoveRejection> check_bob_move(const Ball& prev, const HyperplaneNeighborhood& alice,
                                                   const BigRat& beta, const Ball& next) {
  using R = MoveRejection::Reason;
  if (next.dim() != prev.dim()) return MoveRejection{R::dimension, "ball dimension mismatch"};
  if (next.radius != beta * prev.radius)
    return MoveRejection{R::radius, "radius " + to_string(next.radius) + " != beta * " + to_string(prev.radius)};
  if (!prev.contains(next)) return MoveRejection{R::containment, "ball leaves the previous ball"};
  if (alice.intersects(next)) return MoveRejection{R::intersection, "ball meets Alice's neighborhood"};
  return std::nullopt;
}

struct HRound {
  std::size_t round = 0;   // l
  AliceMove alice;         // chosen against B_l
  Ball bob;                // B_{l+1}
};

struct GameTranscript {
  std::size_t dim = 1;
  BigRat beta;
  Ball initial;
  std::vector<HRound> rounds;
  std::optional<MoveRejection> abort;        // illegal move that ended the game
  std::optional<std::size_t> abort_round;

  const Ball& final_ball() const { return rounds.empty() ? initial : rounds.back().bob; }
};

/// A hyperplane game in progress.
class HGame {
 public:
  explicit HGame(HGameConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    t_.dim = cfg_.dim();
    t_.beta = cfg_.beta;
    t_.initial = cfg_.initial;
  }

  const HGameConfig& config() const noexcept { return cfg_; }
  const GameTranscript& transcript() const noexcept { return t_; }
  std::size_t round() const noexcept { return t_.rounds.size(); }
  const Ball& current() const { return t_.final_ball(); }
  Position position() const { return {cfg_, round(), current()}; }

  std::optional<MoveRejection> apply_alice(const AliceMove& mv) {
    using R = MoveRejection::Reason;
    if (mv.neighborhood.plane.dim() != cfg_.dim()) return MoveRejection{R::dimension, "plane dimension mismatch"};
    if (mv.neighborhood.thickness > cfg_.beta * current().radius)
      return MoveRejection{R::thickness, "thickness exceeds beta * rho"};
    pending_ = mv;
    return std::nullopt;
  }

  /// Validates Bob's ball against the pending Alice move and appends the round.
  std::optional<MoveRejection> apply_bob(const Ball& b) {
    if (!pending_) throw DomainError("apply_bob before apply_alice");
    if (auto bad = check_bob_move(current(), pending_->neighborhood, cfg_.beta, b)) return bad;
    t_.rounds.push_back({round(), *pending_, b});
    pending_.reset();
    return std::nullopt;
  }

  const std::optional<AliceMove>& pending() const noexcept { return pending_; }

  void abort_with(MoveRejection r) {
    t_.abort_round = round();
    t_.abort = std::move(r);
  }

 private:
  HGameConfig cfg_;
  GameTranscript t_;
  std::optional<AliceMove> pending_;
};

/// Plays the round budget. An illegal move ends the game; the transcript
/// keeps every completed round.
inline GameTranscript run_hgame(const HGameConfig& cfg, const AliceStrategy& alice,
                                const BobStrategy& bob) {
  HGame game(cfg);
  while (game.round() < cfg.rounds) {
    const AliceMove mv = alice(game.position());
    if (auto bad = game.apply_alice(mv)) {
      game.abort_with(*bad);
      break;
    }
    const Ball b = bob(game.position(), mv.neighborhood);
    if (auto bad = game.apply_bob(b)) {
      game.abort_with(*bad);
      break;
    }
  }
  return game.transcript();
}

namespace detail {

inline Ball child(const Ball& parent, Point center, const BigRat& beta) {
  return Ball(std::move(center), beta * parent.radius);
}

// Candidate centers on the grid c + t beta^2 rho, |t| beta^2 <= 1 - beta.
inline std::vector<Point> grid_centers(const Ball& b, const BigRat& beta) {
  const BigRat pitch = beta * beta * b.radius;
  const BigInt K = floor_of((1 - beta) / (beta * beta));
  const std::size_t d = b.dim();
  const long k = K.get_si();
  std::vector<Point> out;
  std::vector<long> t(d, -k);
  while (true) {
    Point c = b.center;
    for (std::size_t z = 0; z < d; ++z) c[z] += pitch * BigRat(t[z]);
    out.push_back(std::move(c));
    std::size_t z = d;
    while (z > 0 && t[z - 1] == k) t[--z] = -k;
    if (z == 0) break;
    ++t[z - 1];
  }
  return out;
}

inline BigRat max_norm_distance(const Point& a, const Point& b) {
  BigRat m(0);
  for (std::size_t z = 0; z < a.size(); ++z) m = std::max(m, BigRat(abs(a[z] - b[z])));
  return m;
}

}  // namespace detail

/// A uniformly random legal ball from the grid of pitch beta^2 rho.
class RandomBob {
 public:
  explicit RandomBob(std::uint64_t seed) : rng_(std::make_shared<std::mt19937_64>(seed)) {}

  Ball operator()(const Position& pos, const HyperplaneNeighborhood& alice) const {
    std::vector<Ball> legal;
    for (auto& c : detail::grid_centers(pos.current, pos.config.beta)) {
      Ball b = detail::child(pos.current, std::move(c), pos.config.beta);
      if (!check_bob_move(pos.current, alice, pos.config.beta, b)) legal.push_back(std::move(b));
    }
    if (legal.empty()) throw InternalError("no legal grid ball for Bob");
    std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
    return legal[pick(*rng_)];
  }

 private:
  std::shared_ptr<std::mt19937_64> rng_;
};

/// The legal ball whose center is nearest (max norm) to `target`, among
/// the grid, the clamped target and, in d = 1, points just outside the
/// deleted interval.
inline Ball nearest_legal_ball(const Position& pos, const HyperplaneNeighborhood& alice,
                               const Point& target) {
  const BigRat& beta = pos.config.beta;
  const Ball& cur = pos.current;
  std::vector<Point> candidates;
  Point clamped = target;
  const BigRat reach = (1 - beta) * cur.radius;
  for (std::size_t z = 0; z < cur.dim(); ++z)
    clamped[z] = std::clamp(clamped[z], BigRat(cur.center[z] - reach), BigRat(cur.center[z] + reach));
  candidates.push_back(clamped);
  if (cur.dim() == 1) {
    // Deleted centers: |c - h| <= beta rho + thickness, with h the point.
    const BigRat h = alice.plane.offset / BigRat(alice.plane.normal[0]);
    const BigRat gap = beta * cur.radius + alice.thickness + beta * beta * beta * cur.radius;
    candidates.push_back({BigRat(h - gap)});
    candidates.push_back({BigRat(h + gap)});
  }
  for (auto& c : detail::grid_centers(cur, beta)) candidates.push_back(std::move(c));
  std::optional<Ball> best;
  BigRat best_dist;
  for (auto& c : candidates) {
    Ball b = detail::child(cur, c, beta);
    if (check_bob_move(cur, alice, beta, b)) continue;
    const BigRat dist = detail::max_norm_distance(c, target);
    if (!best || dist < best_dist) {
      best = std::move(b);
      best_dist = dist;
    }
  }
  if (!best) throw InternalError("no legal ball for Bob");
  return *best;
}

/// Lowest-denominator rational point of the ball.
inline Point lowest_denominator_point(const Ball& b) {
  if (b.dim() == 1)
    return {simplest_in_interval(b.center[0] - b.radius, b.center[0] + b.radius)};
  for (unsigned long q = 1;; ++q) {
    Point p;
    bool ok = true;
    for (std::size_t z = 0; z < b.dim() && ok; ++z) {
      const BigInt lo = ceil_of(BigRat((b.center[z] - b.radius) * BigRat(q)));
      const BigInt hi = floor_of(BigRat((b.center[z] + b.radius) * BigRat(q)));
      if (hi < lo) ok = false;
      else p.push_back(make_rat(lo, BigInt(q)));
    }
    if (ok) return p;
    if (q > kEnumerationBudget) throw ResourceError("no low-denominator point found");
  }
}

/// Stays as close as legally possible to the lowest-denominator rational
/// of the current ball.
inline Ball bob_greedy_rational(const Position& pos, const HyperplaneNeighborhood& alice) {
  return nearest_legal_ball(pos, alice, lowest_denominator_point(pos.current));
}

/// Stays as close as legally possible to a fixed point.
inline BobStrategy bob_toward(Point target) {
  return [target = std::move(target)](const Position& pos, const HyperplaneNeighborhood& alice) {
    return nearest_legal_ball(pos, alice, target);
  };
}

/// Alice, except that at one turn she deletes a hyperplane outside the ball.
inline AliceStrategy corrupt_at(AliceStrategy inner, std::size_t bad_round) {
  return [inner = std::move(inner), bad_round](const Position& pos) {
    AliceMove mv = inner(pos);
    if (pos.round != bad_round) return mv;
    const BigRat rho = pos.current.radius;
    mv.neighborhood = HyperplaneNeighborhood(
        Hyperplane::axis(pos.current.dim(), 0, BigRat(pos.current.center[0] + 3 * rho)),
        pos.config.beta * rho);
    mv.vacuous = true;
    mv.blocked_points = 0;
    return mv;
  };
}

/// Independent re-check of a transcript's rules.
inline std::vector<std::string> validate_transcript(const GameTranscript& t) {
  std::vector<std::string> problems;
  const Ball* prev = &t.initial;
  for (std::size_t l = 0; l < t.rounds.size(); ++l) {
    const HRound& r = t.rounds[l];
    if (r.round != l) problems.push_back("round " + std::to_string(l) + ": index mismatch");
    if (r.bob.radius != t.beta * prev->radius)
      problems.push_back("round " + std::to_string(l) + ": radius law broken");
    if (!prev->contains(r.bob)) problems.push_back("round " + std::to_string(l) + ": not nested");
    if (r.alice.neighborhood.thickness > t.beta * prev->radius || r.alice.neighborhood.thickness <= 0)
      problems.push_back("round " + std::to_string(l) + ": thickness out of range");
    if (r.alice.neighborhood.intersects(r.bob))
      problems.push_back("round " + std::to_string(l) + ": ball meets the deleted set");
    prev = &r.bob;
  }
  return problems;
}

struct WindowReport {
  std::size_t k = 0;
  BigInt source_index;
  Multiplier m;
  std::size_t windows = 0;          // processed windows m = 0 .. windows-1
  BigInt q_lo, q_hi;                // verified denominators
  BigInt excluded_below;            // q < excluded_below not covered
  std::size_t candidates = 0;
};

struct Violation {
  std::size_t k = 0;
  BigInt p, q;
};

struct HGameReport {
  bool supported = true;
  std::vector<WindowReport> per_k;
  std::vector<Violation> violations;
  std::vector<std::string> transcript_problems;

  bool pass() const { return supported && violations.empty() && transcript_problems.empty(); }
};

/// Checks ||(i_k/j_k) x - p/q|| >= eps_k q^-2 for every x of the final
/// ball and every q in the windows Alice processed (d = 1, exact).
inline HGameReport verify_hgame_outcome(const GameTranscript& t, const HGameConfig& cfg) {
  HGameReport rep;
  rep.transcript_problems = validate_transcript(t);
  if (cfg.dim() != 1) {
    rep.supported = false;
    return rep;
  }
  const std::size_t played = t.rounds.size();  // turns 0 .. played-1 answered
  const auto selection = extract_subsequence(cfg, progressions_in_budget(played));
  const Ball& fin = t.final_ball();
  for (const auto& sel : selection) {
    WindowReport wr;
    wr.k = sel.k;
    wr.source_index = sel.source_index;
    wr.m = sel.m;
    const BigRat mult = sel.m.value();
    const BigRat lo = (fin.center[0] - fin.radius) * mult;
    const BigRat hi = (fin.center[0] + fin.radius) * mult;
    // eps = G^(-1/4) <= eps_up.
    const BigRat& G = sel.weight_squared;
    BigRat eps_up;
    if (G >= 1) eps_up = make_rat(1, floor_root(BigRat(G), 4));
    else eps_up = BigRat(ceil_root(BigRat(1 / G), 4));
    bool first = true;
    for (std::size_t m = 0;; ++m) {
      const std::size_t l = TurnAssignment{sel.k, m}.turn();
      if (l >= played) break;
      ++wr.windows;
      const DenominatorWindow w = denominator_window(cfg, sel, l);
      if (first) {
        wr.excluded_below = w.lo;
        wr.q_lo = w.lo;
        first = false;
      }
      if (w.empty()) continue;
      wr.q_hi = w.hi;
      const BigRat delta = eps_up / BigRat(w.lo * w.lo);
      for (const BigRat& f : fractions_in_interval(lo - delta, hi + delta, w.hi)) {
        const BigInt& q0 = f.get_den();
        BigInt mult_q;
        mpz_cdiv_q(mult_q.get_mpz_t(), w.lo.get_mpz_t(), q0.get_mpz_t());
        const BigInt q = q0 * mult_q;
        if (q > w.hi) continue;
        ++wr.candidates;
        BigRat dist(0);
        if (f < lo) dist = lo - f;
        else if (f > hi) dist = f - hi;
        // dist < eps / q^2  <=>  dist^4 q^8 G < 1
        const BigRat d2 = dist * dist;
        const BigInt q2 = q * q;
        const BigInt q4 = q2 * q2;
        if (d2 * d2 * BigRat(q4 * q4) * G < 1)
          rep.violations.push_back({sel.k, BigInt(f.get_num() * mult_q), q});
      }
    }
    rep.per_k.push_back(std::move(wr));
  }
  return rep;
}

}  // namespace badnum
