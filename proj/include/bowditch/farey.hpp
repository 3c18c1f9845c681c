#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "bowditch/core.hpp"

namespace bowditch {

struct InvalidSlope : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Navigation refuses slopes deeper than this; classification always prunes
// or saturates long before.
inline constexpr long long kSlopeLimit = 1LL << 60;

/// A vertex p/q of the Farey graph, q >= 0, gcd(|p|, q) = 1; 1/0 is the
/// slope at infinity. Labels a free homotopy class of essential simple
/// closed curve on the punctured torus.
struct Slope {
  long long p = 1;
  long long q = 0;

  friend bool operator==(const Slope&, const Slope&) = default;
};

// Sign normalization only; assumes the pair is already coprime.
inline Slope normalize_slope(long long p, long long q) {
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

inline Slope make_slope(long long p, long long q) {
  Slope s = normalize_slope(p, q);
  if (s.p == 0 && s.q == 0) throw InvalidSlope("0/0 is not a slope");
  if (std::gcd(s.p < 0 ? -s.p : s.p, s.q) != 1) {
    throw InvalidSlope("slope must be a coprime pair");
  }
  return s;
}

inline __int128 slope_cross(const Slope& a, const Slope& b) {
  return static_cast<__int128>(a.p) * b.q - static_cast<__int128>(b.p) * a.q;
}

/// Farey adjacency: |p_a q_b - p_b q_a| = 1.
inline bool are_neighbors(const Slope& a, const Slope& b) {
  const __int128 c = slope_cross(a, b);
  return c == 1 || c == -1;
}

/// The other common neighbor of (u, v) besides `old`: one of u+v, u-v as
/// integer vectors.
inline Slope flip_vertex(const Slope& old, const Slope& u, const Slope& v) {
  const Slope c1 = normalize_slope(u.p + v.p, u.q + v.q);
  const Slope c2 = normalize_slope(u.p - v.p, u.q - v.q);
  const Slope out = (c1 == old) ? c2 : c1;
  if (out.p > kSlopeLimit || out.p < -kSlopeLimit || out.q > kSlopeLimit) {
    throw std::overflow_error("slope exceeds navigation limit");
  }
  return out;
}

/// Three mutually adjacent slopes: a triangle of the Farey tessellation.
struct FareyTriangle {
  Slope s1, s2, s3;
};

inline FareyTriangle make_triangle(Slope a, Slope b, Slope c) {
  if (!are_neighbors(a, b) || !are_neighbors(b, c) || !are_neighbors(a, c)) {
    throw InvalidSlope("slopes are not mutual Farey neighbors");
  }
  return {a, b, c};
}

/// The three triangles sharing an edge with t; result i replaces slope i.
inline std::array<FareyTriangle, 3> adjacent_triangles(const FareyTriangle& t) {
  return {FareyTriangle{flip_vertex(t.s1, t.s2, t.s3), t.s2, t.s3},
          FareyTriangle{t.s1, flip_vertex(t.s2, t.s1, t.s3), t.s3},
          FareyTriangle{t.s1, t.s2, flip_vertex(t.s3, t.s1, t.s2)}};
}

/// A Farey triangle carrying the traces of its three vertices.
struct TriangleState {
  std::array<Slope, 3> slopes;
  std::array<Complex, 3> traces;
};

/// Base convention: X <-> 1/0, Y <-> 0/1, XY <-> 1/1 with traces (x, y, z).
inline TriangleState base_triangle(const CharacterTriple& t) {
  return {{Slope{1, 0}, Slope{0, 1}, Slope{1, 1}}, {t.x, t.y, t.z}};
}

namespace detail {

// Writing target = m*u + n*v over the integers, the target lies strictly
// beyond the edge (u, v), on the far side from w, iff the sign pattern of
// (m, n) differs from that of w's decomposition.
inline bool beyond_edge(const Slope& target, const Slope& u, const Slope& v,
                        const Slope& w) {
  const __int128 d = slope_cross(u, v);  // +-1
  const __int128 m = slope_cross(target, v) * d;
  const __int128 n = slope_cross(u, target) * d;
  if (m == 0 || n == 0) return false;  // target is u or v
  const __int128 mw = slope_cross(w, v) * d;
  const __int128 nw = slope_cross(u, w) * d;
  return ((m > 0) == (n > 0)) != ((mw > 0) == (nw > 0));
}

}  // namespace detail

/// Trace of the curve of slope `target`, computed by walking the geodesic
/// path of triangle flips from `tri`. Each flip is one Vieta move on the
/// trace triple; magnitudes saturate at kSaturation.
inline Complex trace_from_triangle(TriangleState tri, const Slope& target,
                                   bool* saturated = nullptr) {
  if (saturated) *saturated = false;
  for (;;) {
    for (int i = 0; i < 3; ++i) {
      if (tri.slopes[i] == target) return tri.traces[i];
    }
    int flip = -1;
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      if (detail::beyond_edge(target, tri.slopes[i], tri.slopes[j],
                              tri.slopes[k])) {
        flip = k;
        break;
      }
    }
    if (flip < 0) throw std::logic_error("farey walk: no edge toward target");
    const int i = (flip + 1) % 3, j = (flip + 2) % 3;
    const Slope s = flip_vertex(tri.slopes[flip], tri.slopes[i], tri.slopes[j]);
    Complex w = tri.traces[i] * tri.traces[j] - tri.traces[flip];
    if (std::abs(w) > kSaturation) {
      w = std::polar(kSaturation, std::arg(w));
      if (saturated) *saturated = true;
    }
    tri.slopes[flip] = s;
    tri.traces[flip] = w;
  }
}

inline Complex trace_at_slope(const CharacterTriple& base, const Slope& s,
                              bool* saturated = nullptr) {
  const Slope v = make_slope(s.p, s.q);
  if (!on_variety(base)) throw InvalidTriple("base triple is off the variety");
  return trace_from_triangle(base_triangle(base), v, saturated);
}

/// Test oracle: M(1/0) = mX, M(0/1) = mY, and for a Stern-Brocot mediant
/// M(u (+) v) = M(u) M(v) with u the smaller fraction. Negative slopes go
/// through the mirrored base (x, y, xy - z). Returns tr M(s).
inline Complex matrix_word_trace_oracle(const CharacterTriple& base,
                                        const Slope& slope) {
  const Slope s = make_slope(slope.p, slope.q);
  if (s.p < 0) {
    const CharacterTriple mirror =
        make_triple(base.x, base.y, base.x * base.y - base.z);
    return matrix_word_trace_oracle(mirror, Slope{-s.p, s.q});
  }
  const MatrixPair mp = matrix_lift(base);
  if (s.q == 0) return mp.mX.trace();
  if (s.p == 0) return mp.mY.trace();
  Slope left{0, 1}, right{1, 0};
  Mat2 ml = mp.mY, mr = mp.mX;
  for (;;) {
    const Slope med = normalize_slope(left.p + right.p, left.q + right.q);
    const Mat2 mm = ml * mr;
    const __int128 cmp = slope_cross(s, med);
    if (cmp == 0) return mm.trace();
    if (cmp < 0) {
      right = med;
      mr = mm;
    } else {
      left = med;
      ml = mm;
    }
  }
}

}  // namespace bowditch
