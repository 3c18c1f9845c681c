#pragma once

#include <deque>
#include <optional>
#include <unordered_set>
#include <vector>

#include "bowditch/core.hpp"
#include "bowditch/farey.hpp"
#include "bowditch/reduction.hpp"

namespace bowditch {

enum class Verdict { BQ, NotBQ, Unknown };
enum class WitnessKind { RealTrace, SmallTrace };

struct Witness {
  WitnessKind kind = WitnessKind::RealTrace;
  Slope slope;
  Complex trace;
  bool real_caveat = false;  // realness certified only to kRealEps
};

struct Classification {
  Verdict verdict = Verdict::Unknown;
  std::optional<Witness> witness;
  long long triangles_visited = 0;
  std::vector<std::pair<Slope, Complex>> low_trace_vertices;  // |trace| <= 2
  long long budget_spent = 0;
};

/// Pruning certificate for one directed triangle-graph edge. (a, b) are the
/// traces of the shared edge's endpoints and w the trace just produced by
/// crossing it. When min(|a|,|b|,|w|) > 2 and |w| >= max(|a|,|b|), every
/// vertex strictly beyond the edge has modulus > |w|: the next flip gives
/// |a w - b| >= (|a| - 1)|w| > |w| and the hypothesis is inherited.
inline bool escaping_edge(Complex a, Complex b, Complex w) {
  const double aa = std::abs(a), ab = std::abs(b), aw = std::abs(w);
  return std::min({aa, ab, aw}) > 2.0 && aw >= std::max(aa, ab);
}

namespace detail {

struct FanEnvelope {
  double grow = 0.0;   // coefficient of the r^n term in the scan direction
  double decay = 0.0;  // coefficient of the r^-n term
  double r = 1.0;
  double lo(long long n) const {
    return grow * std::pow(r, double(n)) - decay * std::pow(r, -double(n));
  }
  double hi(long long n) const {
    return grow * std::pow(r, double(n)) + decay * std::pow(r, -double(n));
  }
};

// Off-fan escape from the fan triangle (v, y_n, y_n+1), certified from the
// lower/upper envelopes alone.
inline bool envelope_escape_at(const FanEnvelope& e, double abs_v,
                               long long n) {
  const double l0 = e.lo(n), l1 = e.lo(n + 1);
  // l1 > hi(n) separates consecutive envelopes, so the actual trace moduli
  // |y_n| themselves increase strictly, not just their lower bounds; the
  // separation persists for larger n because lo(n+1) - hi(n) is increasing.
  return l0 > 2.0 && l1 > e.hi(n) && l0 * l1 - abs_v >= e.hi(n + 1);
}

}  // namespace detail

/// Least index n0 in the given direction (+1 or -1, returned with that sign)
/// such that the triangle-inequality envelope |A| r^n - |D| r^-n certifies
/// that every fan vertex at or beyond n0 has trace modulus > 2 and that all
/// off-fan flips there satisfy escaping_edge. Returns LLONG_MAX when the
/// growing coefficient vanishes (the fan decays in that direction and never
/// escapes).
inline long long fan_escape_index(Complex v, Complex y0, Complex y1,
                                  int direction) {
  const FanCoefficients fc = fan_coefficients(v, y0, y1);
  if (fc.r <= 1.0 + 1e-12) {
    throw EllipticVertex("fan escape needs |lambda| > 1");
  }
  detail::FanEnvelope env;
  env.r = fc.r;
  if (direction >= 0) {
    env.grow = std::abs(fc.A);
    env.decay = std::abs(fc.D);
  } else {
    env.grow = std::abs(fc.D);
    env.decay = std::abs(fc.A);
  }
  if (env.grow == 0.0) return std::numeric_limits<long long>::max();
  const double abs_v = std::abs(v);
  for (long long m = 0; m < 1000000; ++m) {
    if (detail::envelope_escape_at(env, abs_v, m) &&
        detail::envelope_escape_at(env, abs_v, m + 1) &&
        detail::envelope_escape_at(env, abs_v, m + 2)) {
      return direction >= 0 ? m : -m;
    }
  }
  return std::numeric_limits<long long>::max();
}

namespace detail {

// Certificate for pruning a crossing (a, b) -> w via the fan of the vertex
// with trace v: the fan seeded (y0 = t_b at index 0, y1 = t_w at index 1)
// is past its escape index at w, and the first off-fan flip escapes on the
// actual values.
inline bool fan_escape_certified(Complex v, Complex tb, Complex tw) {
  if (numerically_real_in(v)) return false;
  if (std::abs(v - 2.0) < kVarietyEps || std::abs(v + 2.0) < kVarietyEps) {
    return false;
  }
  FanCoefficients fc;
  try {
    fc = fan_coefficients(v, tb, tw);
  } catch (const DegenerateEigenvalue&) {
    return false;
  }
  if (fc.r <= 1.0 + 1e-12) return false;
  FanEnvelope env{std::abs(fc.A), std::abs(fc.D), fc.r};
  if (env.grow == 0.0) return false;
  if (std::abs(tb) <= 2.0 || env.lo(1) <= 2.0) return false;
  if (!escaping_edge(tb, tw, tb * tw - v)) return false;
  const double abs_v = std::abs(v);
  return envelope_escape_at(env, abs_v, 1) &&
         envelope_escape_at(env, abs_v, 2);
}

struct SlopeHash {
  std::size_t operator()(const Slope& s) const {
    std::size_t h = std::hash<long long>()(s.p);
    h ^= std::hash<long long>()(s.q) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h;
  }
};

struct TriangleKeyHash {
  std::size_t operator()(const std::array<long long, 6>& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (long long v : k) {
      h ^= std::hash<long long>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

inline std::array<long long, 6> triangle_key(const TriangleState& t) {
  std::array<std::pair<long long, long long>, 3> v{
      std::pair{t.slopes[0].p, t.slopes[0].q},
      std::pair{t.slopes[1].p, t.slopes[1].q},
      std::pair{t.slopes[2].p, t.slopes[2].q}};
  std::sort(v.begin(), v.end());
  return {v[0].first, v[0].second, v[1].first,
          v[1].second, v[2].first, v[2].second};
}

}  // namespace detail

/// Semi-decidable BQ classifier. Breadth-first over Farey triangles from the
/// base triangle, never crossing a certified-escaping edge. NotBQ as soon as
/// a visited trace is numerically in [-2,2] (condition (i) violated) or
/// non-real with modulus < threshold (the main theorem's bound). BQ when the
/// frontier empties: the unpruned region is finite and every vertex of
/// modulus <= 2 has been enumerated. Unknown when the triangle budget runs
/// out first.
inline Classification bq_classify(const CharacterTriple& t,
                                  double threshold = 0.5,
                                  long long budget = 100000) {
  if (!(threshold > 0.0 && threshold <= 0.5)) {
    throw std::invalid_argument(
        "threshold must lie in (0, 0.5]; soundness is certified only there");
  }
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (!on_variety(t)) throw InvalidTriple("bq_classify: off-variety input");

  Classification res;
  std::deque<TriangleState> frontier;
  std::unordered_set<std::array<long long, 6>, detail::TriangleKeyHash> seen;
  std::unordered_set<Slope, detail::SlopeHash> seen_vertex;
  frontier.push_back(base_triangle(t));
  seen.insert(detail::triangle_key(frontier.front()));

  while (!frontier.empty()) {
    if (res.triangles_visited >= budget) {
      res.verdict = Verdict::Unknown;
      res.budget_spent = res.triangles_visited;
      return res;
    }
    const TriangleState tri = frontier.front();
    frontier.pop_front();
    ++res.triangles_visited;

    // small-trace witnesses take precedence over real-trace ones
    for (int i = 0; i < 3; ++i) {
      const Complex v = tri.traces[i];
      if (!numerically_real_in(v) && std::abs(v) < threshold) {
        res.verdict = Verdict::NotBQ;
        res.witness = Witness{WitnessKind::SmallTrace, tri.slopes[i], v};
        res.budget_spent = res.triangles_visited;
        return res;
      }
    }
    for (int i = 0; i < 3; ++i) {
      const Complex v = tri.traces[i];
      if (numerically_real_in(v)) {
        res.verdict = Verdict::NotBQ;
        res.witness = Witness{WitnessKind::RealTrace, tri.slopes[i], v,
                              std::abs(v.imag()) > 0.0};
        res.budget_spent = res.triangles_visited;
        return res;
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (seen_vertex.insert(tri.slopes[i]).second &&
          std::abs(tri.traces[i]) <= 2.0) {
        res.low_trace_vertices.emplace_back(tri.slopes[i], tri.traces[i]);
      }
    }

    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      Complex w = tri.traces[i] * tri.traces[j] - tri.traces[k];
      if (std::abs(w) > kSaturation) w = std::polar(kSaturation, std::arg(w));
      if (escaping_edge(tri.traces[i], tri.traces[j], w)) continue;
      if (detail::fan_escape_certified(tri.traces[i], tri.traces[j], w)) {
        continue;
      }
      if (detail::fan_escape_certified(tri.traces[j], tri.traces[i], w)) {
        continue;
      }
      TriangleState next = tri;
      try {
        next.slopes[k] = flip_vertex(tri.slopes[k], tri.slopes[i],
                                     tri.slopes[j]);
      } catch (const std::overflow_error&) {
        res.verdict = Verdict::Unknown;
        res.budget_spent = res.triangles_visited;
        return res;
      }
      next.traces[k] = w;
      if (seen.insert(detail::triangle_key(next)).second) {
        frontier.push_back(next);
      }
    }
  }
  res.verdict = Verdict::BQ;
  res.budget_spent = res.triangles_visited;
  return res;
}

/// Runs the trace-reduction descent first; a real-interval or floor hit is
/// already a NotBQ certificate, otherwise falls through to bq_classify.
inline Classification classify_with_reduction(const CharacterTriple& t,
                                              double threshold = 0.5,
                                              long long budget = 100000,
                                              int max_steps = 10000) {
  const ReductionOutcome red = reduce_trace(t, threshold, 1e-12, max_steps);
  if (red.status == ReductionStatus::ReachedRealInterval ||
      red.status == ReductionStatus::ReachedFloor) {
    Classification res;
    res.verdict = Verdict::NotBQ;
    const bool realish = numerically_real_in(red.final_trace);
    res.witness = Witness{
        realish ? WitnessKind::RealTrace : WitnessKind::SmallTrace,
        red.final_vertex, red.final_trace,
        realish && std::abs(red.final_trace.imag()) > 0.0};
    res.triangles_visited = 0;
    res.budget_spent = static_cast<long long>(red.steps.size());
    return res;
  }
  return bq_classify(t, threshold, budget);
}

}  // namespace bowditch
