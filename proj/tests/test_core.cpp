#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bowditch/core.hpp"

using namespace bowditch;
using doctest::Approx;

namespace {

CharacterTriple random_triple(std::mt19937_64& rng, double min_abs_x = 0.0,
                              double max_abs_x = 10.0,
                              double min_imag_x = 0.0) {
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    const Complex x{box(rng), box(rng)};
    if (std::abs(x) < min_abs_x || std::abs(x) > max_abs_x) continue;
    if (std::abs(x.imag()) <= min_imag_x) continue;
    const Complex y{box(rng), box(rng)};
    const auto [zp, zm] = solve_third_trace(x, y);
    const Complex z = u01(rng) < 0.5 ? zp : zm;
    if (!on_variety(x, y, z)) continue;
    return {x, y, z};
  }
}

}  // namespace

TEST_CASE("variety residual examples") {
  CHECK(variety_residual({0, 0}, {0, 0}, {0, 0}) == 0.0);
  CHECK(variety_residual({3, 0}, {3, 0}, {3, 0}) == 0.0);
  CHECK(variety_residual({3, 0}, {3, 0}, {5, 0}) == Approx(2.0));
}

TEST_CASE("make_triple rejects off-variety points") {
  CHECK_THROWS_AS(make_triple({3, 0}, {3, 0}, {5, 0}), InvalidTriple);
  CHECK_NOTHROW(make_triple({3, 0}, {3, 0}, {6, 0}));
}

TEST_CASE("solve_third_trace examples") {
  SUBCASE("(3,3) gives {3,6}") {
    const auto [zp, zm] = solve_third_trace({3, 0}, {3, 0});
    const double lo = std::min(std::abs(zp), std::abs(zm));
    const double hi = std::max(std::abs(zp), std::abs(zm));
    CHECK(lo == Approx(3.0));
    CHECK(hi == Approx(6.0));
  }
  SUBCASE("(0,0) degenerates to a double zero root") {
    const auto [zp, zm] = solve_third_trace({0, 0}, {0, 0});
    CHECK(std::abs(zp) == 0.0);
    CHECK(std::abs(zm) == 0.0);
  }
  SUBCASE("(2i,2i): both roots satisfy z^2+4z-8=0") {
    const Complex x{0, 2}, y{0, 2};
    const auto [zp, zm] = solve_third_trace(x, y);
    for (Complex z : {zp, zm}) {
      CHECK(std::abs(z * z + 4.0 * z - 8.0) < 1e-9);
      CHECK(on_variety(x, y, z));
    }
  }
}

TEST_CASE("solve_third_trace root sum and product") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  for (int iter = 0; iter < 1000; ++iter) {
    const Complex x{box(rng), box(rng)};
    const Complex y{box(rng), box(rng)};
    const auto [zp, zm] = solve_third_trace(x, y);
    const Complex sum = x * y;
    const Complex prod = x * x + y * y;
    CHECK(std::abs(zp + zm - sum) <= 1e-9 * (1.0 + std::abs(sum)));
    CHECK(std::abs(zp * zm - prod) <= 1e-9 * (1.0 + std::abs(prod)));
    CHECK(on_variety(x, y, zp));
    CHECK(on_variety(x, y, zm));
  }
}

TEST_CASE("vieta_move examples and involution") {
  const CharacterTriple t = make_triple({3, 0}, {3, 0}, {3, 0});
  const CharacterTriple moved = vieta_move(t, Coordinate::Z);
  CHECK(moved.z == Complex{6, 0});
  const CharacterTriple zero = vieta_move({{0, 0}, {0, 0}, {0, 0}},
                                          Coordinate::X);
  CHECK(zero.x == Complex{0, 0});

  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    const CharacterTriple s = random_triple(rng);
    for (Coordinate c : {Coordinate::X, Coordinate::Y, Coordinate::Z}) {
      const CharacterTriple back = vieta_move(vieta_move(s, c), c);
      CHECK(std::abs(back.x - s.x) < 1e-9 * (1.0 + std::abs(s.x)));
      CHECK(std::abs(back.y - s.y) < 1e-9 * (1.0 + std::abs(s.y)));
      CHECK(std::abs(back.z - s.z) < 1e-9 * (1.0 + std::abs(s.z)));
      CHECK(on_variety(vieta_move(s, c)));
    }
  }
}

TEST_CASE("principal_eigenvalue examples") {
  SUBCASE("x = 3") {
    const EigenvalueData ev = principal_eigenvalue({3, 0});
    CHECK(ev.r == Approx((3.0 + std::sqrt(5.0)) / 2.0));
    CHECK(ev.theta == Approx(0.0));
    CHECK(!ev.unit_modulus);
    CHECK(std::abs(ev.lambda + 1.0 / ev.lambda - 3.0) < 1e-12);
  }
  SUBCASE("x = 0 is elliptic with lambda = i") {
    const EigenvalueData ev = principal_eigenvalue({0, 0});
    CHECK(ev.unit_modulus);
    CHECK(ev.r == Approx(1.0));
    CHECK(std::abs(ev.lambda - Complex{0, 1}) < 1e-12);
  }
  SUBCASE("x = 0.3i obeys the small-trace bounds") {
    const EigenvalueData ev = principal_eigenvalue({0, 0.3});
    CHECK(ev.r < 1.2808);
    CHECK(std::abs(std::cos(ev.theta)) < 0.25);
  }
}

TEST_CASE("eigenvalue bounds for |x| < 0.5") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int iter = 0; iter < 20000; ++iter) {
    const Complex x = std::polar(0.5 * std::sqrt(u01(rng)),
                                 2.0 * 3.14159265358979 * u01(rng));
    const EigenvalueData ev = principal_eigenvalue(x);
    CHECK(ev.r < 1.2808);
    CHECK(std::cos(ev.theta) > -0.25);
    CHECK(std::cos(ev.theta) < 0.25);
  }
}

TEST_CASE("matrix_lift fixture (3,3,6)") {
  const CharacterTriple t = make_triple({3, 0}, {3, 0}, {6, 0});
  const MatrixPair mp = matrix_lift(t);
  CHECK(std::abs(mp.mX.trace() - t.x) < 1e-9);
  CHECK(std::abs(mp.mY.trace() - t.y) < 1e-9);
  CHECK(std::abs((mp.mX * mp.mY).trace() - t.z) < 1e-9);
  CHECK(std::abs(mp.mX.det() - 1.0) < 1e-10);
  CHECK(std::abs(mp.mY.det() - 1.0) < 1e-10);
  const Mat2 comm = mp.mX * mp.mY * mp.mX.inverse() * mp.mY.inverse();
  CHECK(std::abs(comm.trace() + 2.0) < 1e-8);
}

TEST_CASE("matrix_lift rejects parabolic x") {
  CHECK_THROWS_AS(matrix_lift({{2, 0}, {1, 0}, {1, 0}}), DegenerateEigenvalue);
}

TEST_CASE("matrix_lift invariants on random on-variety triples") {
  std::mt19937_64 rng(17);
  int tested = 0;
  while (tested < 300) {
    const CharacterTriple t = random_triple(rng);
    if (numerically_real_in(t.x) || std::abs(t.x - 2.0) < 1e-3 ||
        std::abs(t.x + 2.0) < 1e-3) {
      continue;
    }
    ++tested;
    const MatrixPair mp = matrix_lift(t);
    CHECK(std::abs(mp.mX.trace() - t.x) < 1e-9 * (1.0 + std::abs(t.x)));
    CHECK(std::abs(mp.mY.trace() - t.y) < 1e-9 * (1.0 + std::abs(t.y)));
    CHECK(std::abs((mp.mX * mp.mY).trace() - t.z) <
          1e-9 * (1.0 + std::abs(t.z)));
    const Mat2 comm = mp.mX * mp.mY * mp.mX.inverse() * mp.mY.inverse();
    CHECK(std::abs(comm.trace() + 2.0) < 1e-8);
    // AD = x^2 / (x^2 - 4), automatic on the variety
    const Complex A = mp.mY.a, D = mp.mY.d;
    const Complex expect = t.x * t.x / (t.x * t.x - 4.0);
    CHECK(std::abs(A * D - expect) <= 1e-8 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("fan_coefficients reconstructs its seeds") {
  const FanCoefficients fc = fan_coefficients({3, 0}, {3, 0}, {6, 0});
  CHECK(std::abs(fc.A + fc.D - 3.0) < 1e-9);
  CHECK(std::abs(fc.A * fc.lambda + fc.D / fc.lambda - 6.0) < 1e-9);
  CHECK_THROWS_AS(fan_coefficients({2, 0}, {1, 0}, {1, 0}),
                  DegenerateEigenvalue);
}

TEST_CASE("fan_coefficients flags a vanishing coefficient") {
  // construct y0, y1 from A = 0, D = 1
  const Complex x{0, 0.4};
  const EigenvalueData ev = principal_eigenvalue(x);
  const FanCoefficients fc =
      fan_coefficients(x, 1.0, 1.0 / ev.lambda);
  CHECK(fc.zero_coefficient);
}

TEST_CASE("fan normalization achieves 1 <= |D/A| <= r") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  int tested = 0;
  while (tested < 2000) {
    const Complex x = std::polar(0.5 * std::sqrt(u01(rng)),
                                 2.0 * 3.14159265358979 * u01(rng));
    if (std::abs(x.imag()) < 1e-6) continue;
    const Complex y{box(rng), box(rng)};
    const auto [zp, zm] = solve_third_trace(x, y);
    const FanCoefficients fc =
        fan_coefficients(x, y, u01(rng) < 0.5 ? zp : zm, true);
    if (fc.zero_coefficient) continue;
    ++tested;
    REQUIRE(fc.normalized);
    const double ratio = std::abs(fc.D) / std::abs(fc.A);
    CHECK(ratio >= 1.0 - 1e-9);
    CHECK(ratio <= fc.r * (1.0 + 1e-9));
    // re-indexed seeds still reconstruct
    CHECK(std::abs(fc.A + fc.D - fc.y0) < 1e-9 * (1.0 + std::abs(fc.y0)));
  }
}

TEST_CASE("neighbor_trace index convention and recurrence") {
  const FanCoefficients fc = fan_coefficients({3, 0}, {3, 0}, {6, 0});
  CHECK(std::abs(neighbor_trace(fc, 0) - 3.0) < 1e-9);
  CHECK(std::abs(neighbor_trace(fc, 1) - 6.0) < 1e-9);
  CHECK(std::abs(neighbor_trace(fc, 2) - 15.0) < 1e-8);
}

TEST_CASE("neighbor_trace matches the three-term recurrence") {
  std::mt19937_64 rng(23);
  int tested = 0;
  while (tested < 500) {
    const CharacterTriple t = random_triple(rng, 0.05, 1.9, 1e-6);
    ++tested;
    const FanCoefficients fc = fan_coefficients(t.x, t.y, t.z);
    Complex lo = t.y, hi = t.z;  // indices 0, 1
    for (int n = 2; n <= 30; ++n) {
      const Complex next = t.x * hi - lo;
      lo = hi;
      hi = next;
      const Complex closed = neighbor_trace(fc, n);
      const double scale = std::max(std::abs(closed), std::abs(next));
      CHECK(std::abs(closed - next) <= 1e-8 * scale);
    }
    lo = t.z;
    hi = t.y;  // walk backwards: y_{n-1} = x y_n - y_{n+1}
    for (int n = -1; n >= -30; --n) {
      const Complex next = t.x * hi - lo;
      lo = hi;
      hi = next;
      const Complex closed = neighbor_trace(fc, n);
      const double scale = std::max(std::abs(closed), std::abs(next));
      CHECK(std::abs(closed - next) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("neighbor_trace saturates instead of overflowing") {
  const FanCoefficients fc = fan_coefficients({10, 0}, {10, 0}, {90, 0});
  bool saturated = false;
  const Complex v = neighbor_trace(fc, 400, &saturated);
  CHECK(saturated);
  CHECK(std::abs(v) == Approx(kSaturation));
}
