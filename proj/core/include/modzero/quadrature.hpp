#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modzero/evaluate.hpp"

namespace modzero {

/// Globally adaptive 21-point Gauss-Kronrod on [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate is below tol times the L1 norm over [a, b], or 2^max_depth pieces
/// have been used. A purely local stopping rule stalls where the integrand is
/// dominated by rounding noise (near zeros of a large-weight form).
template <class F>
long double gk_integrate(F&& f, long double a, long double b, double tol, unsigned max_depth = 10,
                         long double* error = nullptr) {
  if (!(b > a)) return 0;
  using Rule = boost::math::quadrature::gauss_kronrod<long double, 21>;
  struct Piece {
    long double a, b, value, l1, err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  auto eval = [&](long double lo, long double hi) {
    long double err = 0, l1 = 0;
    const long double v = Rule::integrate(f, lo, hi, 0, 0.0L, &err, &l1);
    // The single-rule error estimate refers to the integrand mapped onto [-1, 1].
    return Piece{lo, hi, v, l1, err * (hi - lo) / 2};
  };
  std::priority_queue<Piece> heap;
  Piece whole = eval(a, b);
  long double value = whole.value, l1 = whole.l1, err = whole.err;
  heap.push(whole);
  const std::size_t max_pieces = std::size_t{1} << std::min(max_depth, 20u);
  while (err > tol * l1 && heap.size() < max_pieces) {
    const Piece worst = heap.top();
    heap.pop();
    const long double mid = 0.5L * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Piece left = eval(worst.a, mid), right = eval(mid, worst.b);
    value += left.value + right.value - worst.value;
    l1 += left.l1 + right.l1 - worst.l1;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  if (error) *error = err;
  return value;
}

/// Integral of h(x, y) dx dy over a finite box, x innermost.
template <class H>
long double integrate_box(const BoxRegion& box, H&& h, double tol) {
  return gk_integrate(
      [&](long double y) {
        return gk_integrate([&](long double x) { return h(x, y); }, box.x_lo, box.x_hi, tol * 0.1);
      },
      box.y_lo, box.y_hi, tol);
}

/// Integral of h(x, y) dx dy over the part of a finite box inside F.
///
/// The strip y >= 1 is integrated with x innermost; below y = 1 the lower limit
/// follows the arc sqrt(1 - x^2) and y is innermost.
template <class H>
long double integrate_box_in_F(const BoxRegion& box, H&& h, double tol) {
  const long double xa = std::max<long double>(box.x_lo, -0.5L);
  const long double xb = std::min<long double>(box.x_hi, 0.5L);
  if (!(xb > xa)) return 0;
  long double total = 0;
  if (box.y_hi > 1) {
    const BoxRegion upper{static_cast<double>(xa), static_cast<double>(xb), std::max(box.y_lo, 1.0), box.y_hi};
    if (upper.y_hi > upper.y_lo) total += integrate_box(upper, h, tol);
  }
  if (box.y_lo < 1) {
    const long double top = std::min<long double>(box.y_hi, 1.0L);
    auto inner = [&](long double x) {
      const long double lo = std::max<long double>(box.y_lo, std::sqrt(std::max<long double>(0, 1 - x * x)));
      if (!(top > lo)) return 0.0L;
      return gk_integrate([&](long double y) { return h(x, y); }, lo, top, tol * 0.1);
    };
    std::vector<long double> cuts{xa};
    if (box.y_lo > 0 && box.y_lo < 1) {
      const long double xs = std::sqrt(1 - static_cast<long double>(box.y_lo) * box.y_lo);
      for (long double c : {-xs, xs}) {
        if (c > xa && c < xb) cuts.push_back(c);
      }
    }
    cuts.push_back(xb);
    for (std::size_t i = 1; i < cuts.size(); ++i) total += gk_integrate(inner, cuts[i - 1], cuts[i], tol);
  }
  return total;
}

}  // namespace modzero
