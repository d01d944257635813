#pragma once

#include <string>
#include <vector>

#include "modzero/eigen.hpp"
#include "modzero/evaluate.hpp"
#include "modzero/real.hpp"

namespace modzero {

inline constexpr int kGammaPrecisionBits = 160;

/// ln sum_{m=0}^{n} x^m / m!, summed outward from the largest term.
Real log_exp_partial_sum(const Real& x, long n);
long double log_exp_partial_sum(long double x, long n);

/// ln Gamma(a, x) = ln (a-1)! - x + ln sum_{m<a} x^m/m! for integer a >= 1, x > 0.
Real log_gamma_inc(long a, const Real& x);
long double log_gamma_inc(long a, long double x);

/// Gamma(k-1, k) / Gamma(k-1) = e^-k sum_{m <= k-2} k^m/m!.
Real ratio_half(long k, int precision_bits = kGammaPrecisionBits);

/// theta with e^-k (sum_{m <= k-1} k^m/m! + theta k^k/k!) = 1/2. The subtraction
/// is redone at doubled precision when it cancels more than half the bits.
Real ramanujan_theta(long k, int precision_bits = kGammaPrecisionBits);

/// e^-k sum_{m <= k} k^m/m!, the probability that a Poisson(k) variable is <= k.
Real poisson_cdf_half(long k, int precision_bits = kGammaPrecisionBits);

struct GammaIncReport {
  long k = 0;
  Real ratio;
  Real theta;
  Real poisson_cdf;
};

GammaIncReport gamma_report(long k, int precision_bits = kGammaPrecisionBits);

struct BoundSeriesValue {
  /// ln of y^k sum_{n <= N} e^(-4 pi n y) (4 pi n)^(k-1) / Gamma(k-1, n).
  long double log_partial;
  /// ln of the certified bound on the terms n > N.
  long double log_tail;
  /// ln of partial + tail bound.
  long double log_value;
};

/// Throws InvalidArgument for y < sqrt(3)/2 or k < 3, and InsufficientTruncation
/// when the tail bound exceeds 1e-12 of the partial sum.
BoundSeriesValue bound_series(int k, double y, int N);

/// Smallest N at which bound_series certifies its tail.
int bound_series_terms(int k, double y);

struct SupMassRow {
  std::string form_id;
  int weight = 0;
  FormKind kind = FormKind::Eigenform;
  std::optional<int> eigen_index;
  /// max over the grid of y^k |f|^2 / <f, f>.
  long double sup = 0;
  UpperHalfPoint argmax{};
  /// max over the grid of (y^k |f|^2 / <f, f>) / bound_series(y).
  long double max_ratio_to_bound = 0;
  /// max over the grid of (y^k |f|^2 / S) / bound_series(y), S the Siegel-set norm.
  long double max_siegel_ratio_to_bound = 0;
  /// S / <f, f>.
  long double siegel_over_petersson = 0;
};

struct SupMassResult {
  std::vector<SupMassRow> rows;
  /// Least-squares slope of ln sup against ln k.
  double slope = 0;
};

/// Grid of nx by ny points on [x_lo, x_hi] x [y_lo, y_hi], endpoints included.
std::vector<UpperHalfPoint> rectangular_grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny);
/// 33 x 33 points on [-1/2, 1/2] x [sqrt(3)/2, 3].
std::vector<UpperHalfPoint> default_sup_grid();

/// Forms need petersson_norm set.
SupMassResult sup_mass_experiment(const std::vector<FormNumeric>& forms, const std::vector<UpperHalfPoint>& grid);

}  // namespace modzero
