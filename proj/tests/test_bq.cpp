#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bowditch/bq.hpp"

using namespace bowditch;

namespace {

CharacterTriple random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    const Complex x{box(rng), box(rng)};
    const Complex y{box(rng), box(rng)};
    const auto [zp, zm] = solve_third_trace(x, y);
    const Complex z = u01(rng) < 0.5 ? zp : zm;
    if (!on_variety(x, y, z)) continue;
    return {x, y, z};
  }
}

// All triangles reachable by crossing the directed edge (a, b) from the
// triangle (a, b, w), expanded to the given depth. Calls fn(parent_w, new_w)
// for every onward crossing.
template <class Fn>
void expand_beyond(Complex a, Complex b, Complex w, int depth, Fn&& fn) {
  if (depth == 0) return;
  if (std::abs(w) >= kSaturation) return;
  const Complex w1 = a * w - b;  // cross (a, w)
  const Complex w2 = b * w - a;  // cross (b, w)
  fn(w, w1);
  fn(w, w2);
  expand_beyond(a, w, w1, depth - 1, fn);
  expand_beyond(b, w, w2, depth - 1, fn);
}

}  // namespace

TEST_CASE("escaping_edge examples") {
  CHECK(escaping_edge({3, 0}, {3, 0}, {6, 0}));
  CHECK(!escaping_edge({1.5, 0}, {3, 0}, {7, 0}));
  CHECK(!escaping_edge({3, 0}, {5, 0}, {4, 0}));
}

TEST_CASE("escaping edges are sound to depth 12") {
  std::mt19937_64 rng(61);
  int edges = 0;
  while (edges < 50) {
    const CharacterTriple t = random_triple(rng);
    const Complex w = t.x * t.y - t.z;
    if (!escaping_edge(t.x, t.y, w)) continue;
    ++edges;
    expand_beyond(t.x, t.y, w, 12, [&](Complex parent, Complex child) {
      if (std::abs(child) >= kSaturation) return;
      CHECK(std::abs(child) > 2.0);
      CHECK(std::abs(child) > std::abs(parent));
    });
  }
}

TEST_CASE("fan_escape_index fixtures") {
  CHECK(fan_escape_index({3, 0}, {3, 0}, {6, 0}, +1) == 1);
  CHECK_THROWS_AS(fan_escape_index({0, 0}, {1, 0}, {1, 0}, +1),
                  EllipticVertex);
}

TEST_CASE("fan_escape_index is sound for 64 further indices") {
  std::mt19937_64 rng(67);
  int tested = 0;
  while (tested < 200) {
    const CharacterTriple t = random_triple(rng);
    const EigenvalueData ev = principal_eigenvalue(t.x);
    if (ev.r < 1.01) continue;
    const FanCoefficients fc = fan_coefficients(t.x, t.y, t.z);
    if (fc.zero_coefficient) continue;
    for (int dir = -1; dir <= 1; dir += 2) {
      const long long n0 = fan_escape_index(t.x, t.y, t.z, dir);
      if (n0 == std::numeric_limits<long long>::max()) continue;
      ++tested;
      double prev = 0.0;
      for (long long k = 0; k < 64; ++k) {
        const long long n = n0 + dir * k;
        bool sat = false;
        const double a = std::abs(neighbor_trace(fc, n, &sat));
        if (sat) break;
        CHECK(a > 2.0);
        CHECK(a > prev);
        prev = a;
        // off-fan flip out of the triangle (v, y_n, y_{n+dir}) escapes
        const Complex yn = neighbor_trace(fc, n);
        const Complex yn1 = neighbor_trace(fc, n + dir, &sat);
        if (sat) break;
        CHECK(escaping_edge(yn, yn1, yn * yn1 - t.x));
      }
    }
  }
}

TEST_CASE("bq_classify fixtures") {
  SUBCASE("(3,3,3) is BQ with a single visited triangle") {
    const Classification c = bq_classify({{3, 0}, {3, 0}, {3, 0}});
    CHECK(c.verdict == Verdict::BQ);
    CHECK(c.triangles_visited == 1);
    CHECK(c.low_trace_vertices.empty());
  }
  SUBCASE("the quaternionic character is NotBQ with a real-trace witness") {
    const Classification c = bq_classify({{0, 0}, {0, 0}, {0, 0}});
    CHECK(c.verdict == Verdict::NotBQ);
    REQUIRE(c.witness.has_value());
    CHECK(c.witness->kind == WitnessKind::RealTrace);
  }
  SUBCASE("a small non-real trace is NotBQ by the main theorem") {
    const Complex x{0.25, 0.25};
    const auto [zp, zm] = solve_third_trace(x, {1.3, 0.4});
    const Classification c = bq_classify(make_triple(x, {1.3, 0.4}, zp));
    CHECK(c.verdict == Verdict::NotBQ);
    REQUIRE(c.witness.has_value());
    CHECK(c.witness->kind == WitnessKind::SmallTrace);
  }
}

TEST_CASE("bq_classify input validation") {
  CHECK_THROWS_AS(bq_classify({{3, 0}, {3, 0}, {5, 0}}), InvalidTriple);
  CHECK_THROWS_AS(bq_classify({{3, 0}, {3, 0}, {6, 0}}, 0.7),
                  std::invalid_argument);
  CHECK_THROWS_AS(bq_classify({{3, 0}, {3, 0}, {6, 0}}, 0.5, 0),
                  std::invalid_argument);
}

TEST_CASE("verdicts are invariant under symmetries and base change") {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 40; ++iter) {
    const CharacterTriple t = random_triple(rng);
    const long long budget = 20000;
    const Classification ref = bq_classify(t, 0.5, budget);

    const Complex c[3] = {t.x, t.y, t.z};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      const Classification alt =
          bq_classify({c[p[0]], c[p[1]], c[p[2]]}, 0.5, budget);
      CHECK(alt.verdict == ref.verdict);
    }
    const double signs[4][3] = {
        {1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
    for (const auto& s : signs) {
      const Classification alt =
          bq_classify({s[0] * t.x, s[1] * t.y, s[2] * t.z}, 0.5, budget);
      CHECK(alt.verdict == ref.verdict);
    }
    // Vieta-adjacent base triangle: same character
    const Classification alt =
        bq_classify(vieta_move(t, Coordinate::Z), 0.5, budget);
    CHECK(alt.verdict == ref.verdict);
  }
}

TEST_CASE("verdicts are monotone in the budget") {
  std::mt19937_64 rng(73);
  for (int iter = 0; iter < 30; ++iter) {
    const CharacterTriple t = random_triple(rng);
    const Classification small = bq_classify(t, 0.5, 500);
    if (small.verdict == Verdict::Unknown) continue;
    for (long long budget : {1000LL, 5000LL, 50000LL}) {
      CHECK(bq_classify(t, 0.5, budget).verdict == small.verdict);
    }
  }
}

TEST_CASE("classify_with_reduction agrees with bq_classify") {
  const Classification q = classify_with_reduction({{0, 0}, {0, 0}, {0, 0}});
  CHECK(q.verdict == Verdict::NotBQ);
  const Classification f = classify_with_reduction({{3, 0}, {3, 0}, {3, 0}});
  CHECK(f.verdict == Verdict::BQ);

  std::mt19937_64 rng(79);
  for (int iter = 0; iter < 100; ++iter) {
    const CharacterTriple t = random_triple(rng);
    const Classification a = bq_classify(t, 0.5, 20000);
    const Classification b = classify_with_reduction(t, 0.5, 20000);
    if (a.verdict != Verdict::Unknown && b.verdict != Verdict::Unknown) {
      CHECK(a.verdict == b.verdict);
    }
  }
}
