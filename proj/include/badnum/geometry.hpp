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

// Exact-rational balls and hyperplanes, and the simplex lemma: rational
// points of denominator at most (2 d! r)^(-d/(d+1)) in a ball of radius r
// lie on one hyperplane.
//
// Balls are closed and use the max norm. Hyperplane neighborhoods use the
// Euclidean point-to-plane distance, decided by comparing squares.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "badnum/error.hpp"
#include "badnum/farey.hpp"
#include "badnum/numeric.hpp"

namespace badnum {

using Point = std::vector<BigRat>;

struct Ball {
  Point center;
  BigRat radius;

  Ball() = default;
  Ball(Point c, BigRat r) : center(std::move(c)), radius(std::move(r)) {
    if (center.empty()) throw DomainError("ball needs dimension >= 1");
    if (radius <= 0) throw DomainError("ball radius must be positive");
  }

  std::size_t dim() const noexcept { return center.size(); }

  bool contains(const Point& x) const {
    for (std::size_t c = 0; c < dim(); ++c)
      if (abs(x[c] - center[c]) > radius) return false;
    return true;
  }

  /// inner is a subset of *this.
  bool contains(const Ball& inner) const {
    BigRat gap(0);
    for (std::size_t c = 0; c < dim(); ++c) gap = std::max(gap, BigRat(abs(inner.center[c] - center[c])));
    return gap + inner.radius <= radius;
  }

  /// Image under x -> s x (s > 0).
  Ball scaled(const BigRat& s) const {
    Point c = center;
    for (auto& v : c) v *= s;
    return Ball(std::move(c), radius * s);
  }

  /// Same center, radius multiplied by f.
  Ball inflated(const BigRat& f) const { return Ball(center, radius * f); }

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// <normal, x> = offset, normal integral with gcd 1 and first nonzero
/// entry positive.
struct Hyperplane {
  std::vector<BigInt> normal;
  BigRat offset;

  static Hyperplane from(const std::vector<BigRat>& normal, const BigRat& offset) {
    if (normal.empty()) throw DomainError("hyperplane needs dimension >= 1");
    BigInt lcm(1);
    for (const auto& v : normal) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
    std::vector<BigInt> n;
    BigInt g(0);
    for (const auto& v : normal) {
      BigRat scaled_v = v * BigRat(lcm);
      n.push_back(scaled_v.get_num());
      g = gcd(g, n.back());
    }
    if (g == 0) throw DomainError("hyperplane normal must be nonzero");
    BigRat scale = BigRat(lcm) / BigRat(g);
    for (auto& v : n) v /= g;
    const auto lead = std::find_if(n.begin(), n.end(), [](const BigInt& v) { return v != 0; });
    if (*lead < 0) {
      for (auto& v : n) v = -v;
      scale = -scale;
    }
    return Hyperplane{std::move(n), offset * scale};
  }

  /// Through the point x with normal e_axis.
  static Hyperplane axis(std::size_t dim, std::size_t axis_index, const BigRat& at) {
    std::vector<BigRat> n(dim, BigRat(0));
    n.at(axis_index) = 1;
    return from(n, at);
  }

  std::size_t dim() const noexcept { return normal.size(); }

  /// <normal, x> - offset.
  BigRat signed_value(const Point& x) const {
    BigRat s = -offset;
    for (std::size_t c = 0; c < dim(); ++c) s += BigRat(normal[c]) * x[c];
    return s;
  }

  bool contains(const Point& x) const { return signed_value(x) == 0; }

  BigInt norm_squared() const {
    BigInt s(0);
    for (const auto& v : normal) s += v * v;
    return s;
  }

  BigInt norm_l1() const {
    BigInt s(0);
    for (const auto& v : normal) s += abs(v);
    return s;
  }

  /// Image under x -> s x (s > 0).
  Hyperplane scaled(const BigRat& s) const { return Hyperplane{normal, offset * s}; }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// Euclidean point-to-plane distance, held as its exact square.
struct PlaneDistance {
  BigRat squared;

  /// The distance itself when it is rational.
  std::optional<BigRat> exact() const {
    const BigInt n = floor_root(squared.get_num(), 2);
    const BigInt d = floor_root(squared.get_den(), 2);
    if (n * n == squared.get_num() && d * d == squared.get_den()) return make_rat(n, d);
    return std::nullopt;
  }

  /// Sign of (distance - t) for t >= 0.
  int compare(const BigRat& t) const {
    const BigRat t2 = t * t;
    return squared < t2 ? -1 : (squared > t2 ? 1 : 0);
  }
};

inline PlaneDistance point_plane_distance(const Point& x, const Hyperplane& h) {
  const BigRat v = h.signed_value(x);
  return {BigRat(v * v / BigRat(h.norm_squared()))};
}

/// Closed set { x : dist(x, plane) <= thickness }.
struct HyperplaneNeighborhood {
  Hyperplane plane;
  BigRat thickness;

  HyperplaneNeighborhood() = default;
  HyperplaneNeighborhood(Hyperplane p, BigRat t) : plane(std::move(p)), thickness(std::move(t)) {
    if (thickness <= 0) throw DomainError("neighborhood thickness must be positive");
  }

  bool contains(const Point& x) const {
    return point_plane_distance(x, plane).compare(thickness) <= 0;
  }

  /// The closed max-norm ball meets the closed neighborhood.
  bool intersects(const Ball& b) const {
    // Over the cube, <n,x> ranges over <n,c> +- r |n|_1.
    const BigRat gap = abs(plane.signed_value(b.center)) - b.radius * BigRat(plane.norm_l1());
    if (gap <= 0) return true;
    return gap * gap <= thickness * thickness * BigRat(plane.norm_squared());
  }

  friend bool operator==(const HyperplaneNeighborhood&, const HyperplaneNeighborhood&) = default;
};

/// A rational point p/q, p in Z^d, with q minimal.
struct RationalPoint {
  std::vector<BigInt> p;
  BigInt q;

  Point value() const {
    Point x;
    for (const auto& v : p) x.push_back(make_rat(v, q));
    return x;
  }
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

inline RationalPoint to_rational_point(const Point& x) {
  RationalPoint r;
  r.q = 1;
  for (const auto& v : x) mpz_lcm(r.q.get_mpz_t(), r.q.get_mpz_t(), v.get_den_mpz_t());
  for (const auto& v : x) r.p.push_back(BigRat(v * BigRat(r.q)).get_num());
  return r;
}

/// Default work budget for enumerations.
inline constexpr std::size_t kEnumerationBudget = 20'000'000;

/// All rational points with minimal common denominator q <= q_max in the
/// closed ball, ordered by (q, p lexicographic).
inline std::vector<RationalPoint> rationals_in_ball(const Ball& b, const BigInt& q_max,
                                                    std::size_t budget = kEnumerationBudget) {
  if (q_max < 1) throw DomainError("q_max must be >= 1");
  std::vector<RationalPoint> out;
  const std::size_t d = b.dim();
  if (d == 1) {
    // Farey walk touches only the fractions present, so the work is about
    // (2r) q_max^2.
    const BigRat width = 2 * b.radius;
    if (width * BigRat(q_max * q_max) > BigRat(static_cast<unsigned long>(budget)))
      throw ResourceError("rational enumeration budget exceeded");
    for (const auto& f : fractions_in_interval(b.center[0] - b.radius, b.center[0] + b.radius,
                                               q_max, budget))
      out.push_back({{f.get_num()}, f.get_den()});
    std::sort(out.begin(), out.end(), [](const RationalPoint& u, const RationalPoint& v) {
      return u.q != v.q ? u.q < v.q : u.p < v.p;
    });
    return out;
  }
  if (q_max > static_cast<unsigned long>(budget))
    throw ResourceError("rational enumeration budget exceeded");
  std::size_t work = 0;
  const unsigned long qm = q_max.get_ui();
  std::vector<BigInt> lo(d), hi(d), cur(d);
  for (unsigned long q = 1; q <= qm; ++q) {
    const BigRat qq(q);
    bool empty = false;
    std::size_t count = 1;
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = ceil_of(BigRat((b.center[c] - b.radius) * qq));
      hi[c] = floor_of(BigRat((b.center[c] + b.radius) * qq));
      if (hi[c] < lo[c]) {
        empty = true;
        break;
      }
      BigInt span = hi[c] - lo[c] + 1;
      if (!span.fits_ulong_p() || span.get_ui() > budget)
        throw ResourceError("rational enumeration budget exceeded");
      count *= span.get_ui();
      if (count > budget) throw ResourceError("rational enumeration budget exceeded");
    }
    ++work;
    if (empty) continue;
    work += count;
    if (work > budget) throw ResourceError("rational enumeration budget exceeded");
    cur = lo;
    while (true) {
      BigInt g(q);
      for (const auto& v : cur) g = gcd(g, v);
      if (g == 1) out.push_back({cur, BigInt(q)});
      bool exhausted = true;
      for (std::size_t c = d; c-- > 0;) {
        if (cur[c] < hi[c]) {
          ++cur[c];
          for (std::size_t z = c + 1; z < d; ++z) cur[z] = lo[z];
          exhausted = false;
          break;
        }
      }
      if (exhausted) break;
    }
  }
  return out;
}

/// (2 d! r)^(-d/(d+1)), rounded down to a rational at about 50 digits.
inline BigRat denominator_threshold(std::size_t d, const BigRat& r) {
  if (r <= 0) throw DomainError("radius must be positive");
  const BigRat base = pow_rat(BigRat(1) / (2 * BigRat(factorial(d)) * r), static_cast<long>(d));
  Real v;
  mpfr_set_q(v.get(), base.get_mpq_t(), MPFR_RNDD);
  mpfr_rootn_ui(v.get(), v.get(), d + 1, MPFR_RNDD);
  return v.to_rational();
}

/// floor((2 d! r)^(-d/(d+1))), exactly.
inline BigInt denominator_bound(std::size_t d, const BigRat& r) {
  if (r <= 0) throw DomainError("radius must be positive");
  const BigRat base = pow_rat(BigRat(1) / (2 * BigRat(factorial(d)) * r), static_cast<long>(d));
  return floor_root(base, d + 1);
}

struct HullResult {
  /// A hyperplane containing every point, when one exists.
  std::optional<Hyperplane> plane;
  /// Otherwise d + 1 affinely independent points among the input.
  std::vector<std::size_t> witness;
};

/// Finds a hyperplane through all points, or d+1 affinely independent ones.
inline HullResult common_hyperplane(const std::vector<Point>& points, std::size_t d) {
  HullResult res;
  if (points.empty()) {
    res.plane = Hyperplane::axis(d, 0, BigRat(0));
    return res;
  }
  // Row-echelon basis of the difference vectors, with pivot columns.
  std::vector<Point> basis;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> chosen{0};
  for (std::size_t k = 1; k < points.size(); ++k) {
    Point v(d);
    for (std::size_t c = 0; c < d; ++c) v[c] = points[k][c] - points[0][c];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (v[pivots[b]] == 0) continue;
      const BigRat f = v[pivots[b]] / basis[b][pivots[b]];
      for (std::size_t c = 0; c < d; ++c) v[c] -= f * basis[b][c];
    }
    const auto nz = std::find_if(v.begin(), v.end(), [](const BigRat& t) { return t != 0; });
    if (nz == v.end()) continue;
    basis.push_back(std::move(v));
    pivots.push_back(static_cast<std::size_t>(nz - basis.back().begin()));
    chosen.push_back(k);
    if (basis.size() == d) {
      res.witness = chosen;
      return res;
    }
  }
  // Reduce to RREF over the pivot columns, then read off a kernel vector
  // with the first free column set to 1.
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const BigRat lead = basis[b][pivots[b]];
    for (auto& t : basis[b]) t /= lead;
    for (std::size_t o = 0; o < basis.size(); ++o) {
      if (o == b || basis[o][pivots[b]] == 0) continue;
      const BigRat f = basis[o][pivots[b]];
      for (std::size_t c = 0; c < d; ++c) basis[o][c] -= f * basis[b][c];
    }
  }
  std::size_t free_col = 0;
  while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;
  std::vector<BigRat> normal(d, BigRat(0));
  normal[free_col] = 1;
  for (std::size_t b = 0; b < basis.size(); ++b) normal[pivots[b]] = -basis[b][free_col];
  BigRat offset(0);
  for (std::size_t c = 0; c < d; ++c) offset += normal[c] * points[0][c];
  res.plane = Hyperplane::from(normal, offset);
  return res;
}

struct SimplexCheck {
  enum class Kind { empty, contained, violation };
  Kind kind = Kind::empty;
  BigInt q_bound;                      // floor of the denominator threshold
  std::vector<RationalPoint> points;   // all qualifying rationals
  std::optional<Hyperplane> plane;     // when contained (or empty)
  std::vector<RationalPoint> witness;  // d+1 affinely independent points
};

/// Enumerates the rationals the simplex lemma covers in b and checks that a
/// single hyperplane holds them all.
inline SimplexCheck verify_simplex(const Ball& b, std::size_t budget = kEnumerationBudget) {
  SimplexCheck out;
  out.q_bound = denominator_bound(b.dim(), b.radius);
  if (out.q_bound < 1) {
    out.kind = SimplexCheck::Kind::empty;
    out.plane = Hyperplane::axis(b.dim(), 0, b.center[0]);
    return out;
  }
  out.points = rationals_in_ball(b, out.q_bound, budget);
  if (out.points.empty()) {
    out.kind = SimplexCheck::Kind::empty;
    out.plane = Hyperplane::axis(b.dim(), 0, b.center[0]);
    return out;
  }
  std::vector<Point> values;
  for (const auto& rp : out.points) values.push_back(rp.value());
  HullResult hull = common_hyperplane(values, b.dim());
  if (hull.plane) {
    out.kind = SimplexCheck::Kind::contained;
    out.plane = std::move(hull.plane);
  } else {
    out.kind = SimplexCheck::Kind::violation;
    for (std::size_t k : hull.witness) out.witness.push_back(out.points[k]);
  }
  return out;
}

}  // namespace badnum
