#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>

namespace bowditch {

using Complex = std::complex<double>;

// Relative tolerance for membership in the cubic variety, and for the
// "numerically real" determination used by the classifier.
inline constexpr double kVarietyEps = 1e-9;
inline constexpr double kRealEps = 1e-9;

// Trace magnitudes are clamped here instead of switching to wider arithmetic;
// everything this far out sits behind a pruning certificate.
inline constexpr double kSaturation = 1e150;

struct InvalidTriple : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateEigenvalue : std::domain_error {
  using std::domain_error::domain_error;
};
struct EllipticVertex : std::domain_error {
  using std::domain_error::domain_error;
};

enum class Coordinate { X, Y, Z };

/// A point (x, y, z) of the cubic x^2 + y^2 + z^2 = xyz, i.e. the traces
/// (tr X, tr Y, tr XY) of a type-preserving character.
struct CharacterTriple {
  Complex x, y, z;
};

inline double variety_residual(Complex x, Complex y, Complex z) {
  return std::abs(x * x + y * y + z * z - x * y * z);
}

inline double variety_scale(Complex x, Complex y, Complex z) {
  return 1.0 + std::norm(x) + std::norm(y) + std::norm(z);
}

inline bool on_variety(Complex x, Complex y, Complex z,
                       double eps = kVarietyEps) {
  return variety_residual(x, y, z) <= eps * variety_scale(x, y, z);
}

inline bool on_variety(const CharacterTriple& t, double eps = kVarietyEps) {
  return on_variety(t.x, t.y, t.z, eps);
}

inline CharacterTriple make_triple(Complex x, Complex y, Complex z) {
  if (!on_variety(x, y, z)) {
    throw InvalidTriple("triple does not satisfy x^2+y^2+z^2=xyz");
  }
  return {x, y, z};
}

/// True when v is within kRealEps of the real segment [lo, hi].
inline bool numerically_real_in(Complex v, double lo = -2.0, double hi = 2.0) {
  return std::abs(v.imag()) <= kRealEps && v.real() >= lo - kRealEps &&
         v.real() <= hi + kRealEps;
}

/// The two roots of z^2 - (xy) z + (x^2 + y^2) = 0, the possible third
/// coordinates over (x, y). Returned as (plus-branch, minus-branch) where
/// the plus branch takes the principal square root with positive sign.
/// The smaller root is recovered from the product to avoid cancellation.
inline std::pair<Complex, Complex> solve_third_trace(Complex x, Complex y) {
  const Complex b = x * y;
  const Complex c = x * x + y * y;
  const Complex d = std::sqrt(b * b - 4.0 * c);
  const Complex sum_plus = b + d;
  const Complex sum_minus = b - d;
  Complex zp, zm;
  if (std::norm(sum_plus) >= std::norm(sum_minus)) {
    zp = sum_plus / 2.0;
    zm = (zp == 0.0) ? Complex(0.0) : c / zp;
  } else {
    zm = sum_minus / 2.0;
    zp = (zm == 0.0) ? Complex(0.0) : c / zm;
  }
  return {zp, zm};
}

/// Replace the chosen coordinate w by (product of the other two) - w.
/// Involution; maps the variety to itself.
inline CharacterTriple vieta_move(const CharacterTriple& t, Coordinate c) {
  switch (c) {
    case Coordinate::X:
      return {t.y * t.z - t.x, t.y, t.z};
    case Coordinate::Y:
      return {t.x, t.x * t.z - t.y, t.z};
    case Coordinate::Z:
      return {t.x, t.y, t.x * t.y - t.z};
  }
  throw std::logic_error("bad coordinate");
}

struct EigenvalueData {
  Complex lambda;  // root of s^2 - x s + 1 with |lambda| >= 1
  double r;        // |lambda|
  double theta;    // arg(lambda) in (-pi, pi]
  bool unit_modulus;  // both roots on the unit circle (x in [-2,2] real)
};

/// The eigenvalue lambda with x = lambda + 1/lambda and |lambda| >= 1.
/// In the elliptic case (x real in [-2,2]) both roots are unimodular;
/// the one with non-negative imaginary part is returned and the
/// unit_modulus flag is set.
inline EigenvalueData principal_eigenvalue(Complex x) {
  const Complex d = std::sqrt(x * x - 4.0);
  const Complex l1 = (x + d) / 2.0;
  const Complex l2 = (x - d) / 2.0;
  const double a1 = std::abs(l1);
  const double a2 = std::abs(l2);
  Complex l = (a1 >= a2) ? l1 : l2;
  double r = std::max(a1, a2);
  const bool unit = r <= 1.0 + 1e-12;
  if (unit) {
    l = (l1.imag() >= 0.0) ? l1 : l2;
    r = std::max(std::abs(l), 1.0);
  }
  return {l, r, std::arg(l), unit};
}

/// 2x2 complex matrix, row-major [[a, b], [c, d]].
struct Mat2 {
  Complex a, b, c, d;

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
  Complex trace() const { return a + d; }
  Complex det() const { return a * d - b * c; }
  Mat2 inverse() const {
    const Complex dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
};

struct MatrixPair {
  Mat2 mX, mY;
};

/// Explicit SL(2,C) representatives with rho(X) diagonal:
///   mX = diag(lambda, 1/lambda),  mY = [[A, 1], [AD-1, D]],
/// where A + D = y and lambda A + D/lambda = z. Requires x != +-2.
inline MatrixPair matrix_lift(const CharacterTriple& t) {
  if (std::abs(t.x - 2.0) < kVarietyEps || std::abs(t.x + 2.0) < kVarietyEps) {
    throw DegenerateEigenvalue("x = +-2: parabolic, no diagonal lift");
  }
  const EigenvalueData ev = principal_eigenvalue(t.x);
  const Complex l = ev.lambda;
  const Complex linv = 1.0 / l;
  const Complex denom = l - linv;
  const Complex A = (t.z - linv * t.y) / denom;
  const Complex D = (l * t.y - t.z) / denom;
  Mat2 mX{l, 0.0, 0.0, linv};
  Mat2 mY{A, 1.0, A * D - 1.0, D};
  return {mX, mY};
}

/// Coefficients of the neighbor-trace fan y_n = A lambda^n + D lambda^-n
/// around a vertex of trace x, seeded by y_0, y_1 at consecutive neighbors.
struct FanCoefficients {
  Complex x;
  Complex lambda;
  double r = 1.0;
  Complex A, D;
  Complex y0, y1;  // fan values at indices 0 and 1 under the current A, D
  bool normalized = false;        // 1 <= |D/A| <= r achieved
  bool zero_coefficient = false;  // A or D vanishes; pure geometric fan
};

namespace detail {

// Shift the fan index by k (A *= lambda^k, D *= lambda^-k) and optionally
// reverse direction by swapping A and D, so that 1 <= |D/A| <= r.
inline void normalize_fan(FanCoefficients& fc) {
  if (fc.zero_coefficient || fc.r <= 1.0 + 1e-12) return;
  const double logr = std::log(fc.r);
  double best_pen = std::numeric_limits<double>::infinity();
  bool best_swap = false;
  long long best_k = 0;
  for (int swap = 0; swap < 2; ++swap) {
    const double ratio0 = swap ? std::abs(fc.A) / std::abs(fc.D)
                               : std::abs(fc.D) / std::abs(fc.A);
    const long long k0 =
        std::llround(std::log(ratio0) / (2.0 * logr));
    for (long long k = k0 - 2; k <= k0 + 2; ++k) {
      const double ratio = ratio0 * std::exp(-2.0 * double(k) * logr);
      double pen = 0.0;
      if (ratio < 1.0) pen = 1.0 - ratio;
      if (ratio > fc.r) pen = ratio / fc.r - 1.0;
      if (pen < best_pen) {
        best_pen = pen;
        best_swap = swap != 0;
        best_k = k;
      }
    }
  }
  if (best_swap) std::swap(fc.A, fc.D);
  if (best_k != 0) {
    const Complex lk = std::pow(fc.lambda, double(best_k));
    fc.A *= lk;
    fc.D /= lk;
  }
  fc.y0 = fc.A + fc.D;
  fc.y1 = fc.A * fc.lambda + fc.D / fc.lambda;
  fc.normalized = best_pen <= 1e-9;
}

}  // namespace detail

inline FanCoefficients fan_coefficients(Complex x, Complex y0, Complex y1,
                                        bool normalize = false) {
  if (std::abs(x - 2.0) < kVarietyEps || std::abs(x + 2.0) < kVarietyEps) {
    throw DegenerateEigenvalue("x = +-2: fan coefficients undefined");
  }
  const EigenvalueData ev = principal_eigenvalue(x);
  const Complex l = ev.lambda;
  const Complex linv = 1.0 / l;
  FanCoefficients fc;
  fc.x = x;
  fc.lambda = l;
  fc.r = ev.r;
  fc.A = (y1 - linv * y0) / (l - linv);
  fc.D = y0 - fc.A;
  fc.y0 = y0;
  fc.y1 = y1;
  // On the variety A D = x^2/(x^2-4) identically. The smaller coefficient
  // comes out of a cancellation against the seeds, so recompute it from the
  // larger one via the identity; otherwise the descent compounds the
  // cancellation error geometrically as the traces shrink.
  const Complex ad = x * x / (x * x - 4.0);
  const double scale = std::max({std::abs(y0), std::abs(y1), 1e-300});
  fc.zero_coefficient =
      std::abs(fc.A) <= 1e-14 * scale || std::abs(fc.D) <= 1e-14 * scale;
  if (ad != 0.0 && !fc.zero_coefficient) {
    if (std::abs(fc.A) >= std::abs(fc.D)) {
      fc.D = ad / fc.A;
    } else {
      fc.A = ad / fc.D;
    }
  }
  if (normalize) {
    if (ev.unit_modulus) {
      throw EllipticVertex("fan normalization needs |lambda| > 1");
    }
    detail::normalize_fan(fc);
  }
  return fc;
}

/// A lambda^n + D lambda^-n, saturating at kSaturation in magnitude.
/// lambda^n is evaluated in extended precision: for a near-unit eigenvalue
/// the interesting index can reach ~1e8, where a double-precision phase
/// n*theta carries ~1e-8 rad of error and caps the cancellation depth the
/// descent relies on.
inline Complex neighbor_trace(const FanCoefficients& fc, long long n,
                              bool* saturated = nullptr) {
  if (saturated) *saturated = false;
  using CL = std::complex<long double>;
  // recompute the eigenvalue in long double, picking the root that matches
  // the branch recorded in fc.lambda
  const CL x(fc.x.real(), fc.x.imag());
  const CL disc = std::sqrt(x * x - 4.0L);
  const CL l1 = (x + disc) / 2.0L;
  const CL l2 = (x - disc) / 2.0L;
  const CL target(fc.lambda.real(), fc.lambda.imag());
  const CL l = (std::norm(l1 - target) <= std::norm(l2 - target)) ? l1 : l2;
  const long double logr = std::log(std::abs(l));
  const long double theta = std::arg(l);
  const long double m1 = (fc.A == 0.0)
                             ? -1e308L
                             : std::log((long double)std::abs(fc.A)) +
                                   (long double)n * logr;
  const long double m2 = (fc.D == 0.0)
                             ? -1e308L
                             : std::log((long double)std::abs(fc.D)) -
                                   (long double)n * logr;
  const long double logsat = std::log((long double)kSaturation);
  const long double two_pi = 6.283185307179586476925286766559L;
  const long double ph1 =
      std::fmod(std::arg(CL(fc.A.real(), fc.A.imag())) + (long double)n * theta,
                two_pi);
  const long double ph2 =
      std::fmod(std::arg(CL(fc.D.real(), fc.D.imag())) - (long double)n * theta,
                two_pi);
  if (m1 > logsat || m2 > logsat) {
    if (saturated) *saturated = true;
    return std::polar(kSaturation, double((m1 >= m2) ? ph1 : ph2));
  }
  const CL term1 = (fc.A == 0.0) ? CL(0) : std::polar(std::exp(m1), ph1);
  const CL term2 = (fc.D == 0.0) ? CL(0) : std::polar(std::exp(m2), ph2);
  const CL y = term1 + term2;
  return {double(y.real()), double(y.imag())};
}

}  // namespace bowditch
