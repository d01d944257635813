#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "modzero/eigen.hpp"
#include "modzero/real.hpp"

namespace modzero {

/// z = x + iy in the upper half-plane.
template <class T>
struct HalfPlanePoint {
  T x;
  T y;
};

using UpperHalfPoint = HalfPlanePoint<double>;

/// log|f| and arg f; phase is 0 by convention once log_abs drops below kLogFloor.
template <class T>
struct LogValue {
  T log_abs;
  T phase;
};

inline constexpr double kLogFloor = -1e6;

/// Element of PSL_2(Z), stored with c > 0, or c = 0 and d > 0.
struct GroupElement {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  static GroupElement identity() { return {}; }
  static GroupElement translation(std::int64_t n) { return {1, n, 0, 1}; }
  static GroupElement inversion() { return {0, -1, 1, 0}; }

  GroupElement normalized() const {
    if (c < 0 || (c == 0 && d < 0)) return {-a, -b, -c, -d};
    return *this;
  }
  GroupElement operator*(const GroupElement& o) const {
    return GroupElement{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d}.normalized();
  }
  GroupElement inverse() const { return GroupElement{d, -b, -c, a}.normalized(); }
  bool operator==(const GroupElement&) const = default;

  template <class T>
  HalfPlanePoint<T> apply(const HalfPlanePoint<T>& z) const {
    const T cx_d = T(c) * z.x + T(d);
    const T cy = T(c) * z.y;
    const T den = cx_d * cx_d + cy * cy;
    const T ax_b = T(a) * z.x + T(b);
    return {(ax_b * cx_d + T(a) * T(c) * z.y * z.y) / den, z.y / den};
  }
};

/// Axis-parallel box [x_lo, x_hi] x [y_lo, y_hi] in the upper half-plane.
///
/// Membership is half-open, x_lo <= x < x_hi and y_lo <= y < y_hi, so that a
/// grid of adjacent boxes counts every point once.
struct BoxRegion {
  double x_lo = 0, x_hi = 0, y_lo = 1, y_hi = 1;

  bool contains(double x, double y) const { return x >= x_lo && x < x_hi && y >= y_lo && y < y_hi; }
  /// Throws InvalidArgument unless x_lo <= x_hi and 0 < y_lo <= y_hi.
  void validate() const;
};

/// |x| <= 1/2 and |z| >= 1, with the half-open conventions of reduce_to_fundamental.
template <class T>
bool in_fundamental_domain(const HalfPlanePoint<T>& z) {
  const T r2 = z.x * z.x + z.y * z.y;
  if (z.x < T(-0.5) || z.x >= T(0.5)) return false;
  if (r2 < T(1)) return false;
  if (r2 == T(1) && z.x > T(0)) return false;
  return true;
}

template <class T>
struct Reduction {
  HalfPlanePoint<T> point;
  GroupElement gamma;  // point = gamma.apply(input)
};

/// Moves z into F by translations and z -> -1/z.
///
/// Ties: x' is taken in [-1/2, 1/2); on the arc |z'| = 1 the point with x' <= 0
/// is chosen.
template <class T>
Reduction<T> reduce_to_fundamental(HalfPlanePoint<T> z) {
  using std::floor;
  GroupElement g;
  for (int iter = 0; iter < 10000; ++iter) {
    const T shift = floor(z.x + T(0.5));
    if (shift != T(0)) {
      const auto n = static_cast<std::int64_t>(static_cast<double>(shift));
      z.x -= T(n);
      g = GroupElement::translation(-n) * g;
    }
    const T r2 = z.x * z.x + z.y * z.y;
    if (r2 < T(1)) {
      z = {-z.x / r2, z.y / r2};
      g = GroupElement::inversion() * g;
      continue;
    }
    if (r2 == T(1) && z.x > T(0)) {
      z.x = -z.x;
      g = GroupElement::inversion() * g;
    }
    break;
  }
  return {z, g};
}

/// ln|cz + d| and arg(cz + d) for the automorphy factor of g at z.
template <class T>
LogValue<T> automorphy_log(const GroupElement& g, const HalfPlanePoint<T>& z) {
  using std::atan2;
  using std::log;
  const T re = T(g.c) * z.x + T(g.d);
  const T im = T(g.c) * z.y;
  return {log(re * re + im * im) / 2, atan2(im, re)};
}

template <class T>
T hyperbolic_distance(const HalfPlanePoint<T>& z, const HalfPlanePoint<T>& w) {
  using std::log;
  using std::sqrt;
  const T dx = z.x - w.x, dy = z.y - w.y;
  const T t = (dx * dx + dy * dy) / (2 * z.y * w.y);
  return log(T(1) + t + sqrt(t * (t + T(2))));
}

/// Growth model |a(n)| <= exp(alpha + beta ln n) used to certify truncation tails.
struct CoefficientBound {
  double alpha = 0;
  double beta = 0;
  double log_bound(int n) const { return alpha + beta * std::log(static_cast<double>(n)); }
};

/// Deligne for eigenforms, 2 |2k/B_k| n^(k-1) for Eisenstein series, and for
/// custom forms the tightest alpha with beta = k - 1 over the computed
/// coefficients, times a safety factor 10.
CoefficientBound coefficient_bound(const FormNumeric& f);

/// ln|x| in double range, without overflow for extreme exponents; -inf at 0.
double log_abs_double(const Real& x);

/// Smallest N whose certified tail sum_{n > N} bound(n) e^(-2 pi n y_min) is below
/// exp(eps_log) times the largest term at y_min.
int tail_terms_needed(const FormNumeric& f, double y_min, double eps_log);

/// log|f(z)| and arg f(z) at the form's precision. Points whose y is too small
/// for the available coefficients are reduced to F and the automorphy factor
/// is applied.
LogValue<Real> eval_log(const FormNumeric& f, const HalfPlanePoint<Real>& z);
LogValue<Real> eval_log(const FormNumeric& f, const UpperHalfPoint& z);

/// k ln y + 2 log|f(z)| - ln <f, f>; requires f.petersson_norm.
Real log_mass(const FormNumeric& f, const HalfPlanePoint<Real>& z);
Real log_mass(const FormNumeric& f, const UpperHalfPoint& z);

/// v_k = (2/k) log|f(z)|.
Real v_k(const FormNumeric& f, const HalfPlanePoint<Real>& z);

/// Extended double (long double) evaluator for quadrature and contour work.
///
/// Coefficients are rounded once on construction; this is an explicit
/// precision choice made by the caller, and eval_log remains the reference.
class FastEvaluator {
 public:
  explicit FastEvaluator(const FormNumeric& f, double eps_log = -60.0);

  int weight() const { return weight_; }
  /// Smallest y evaluated directly from the series; below it points are reduced.
  double y_direct() const { return y_direct_; }

  LogValue<long double> eval(long double x, long double y) const;
  /// Value of f at z as a complex number; may overflow for extreme values.
  std::complex<long double> value(long double x, long double y) const;

  void set_log_norm(double log_norm) { log_norm_ = log_norm; }
  double log_norm() const { return log_norm_; }
  /// k ln y + 2 log|f| - ln <f, f> (ln <f, f> = 0 until set).
  long double log_mass(long double x, long double y) const;

 private:
  LogValue<long double> eval_direct(long double x, long double y) const;

  int weight_;
  int ord_;
  std::vector<long double> coeffs_;
  std::vector<double> log_coeffs_;
  CoefficientBound bound_;
  double eps_log_;
  double y_direct_;
  double log_norm_ = 0;
};

}  // namespace modzero
