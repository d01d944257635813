#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modzero/eigen.hpp"
#include "modzero/evaluate.hpp"
#include "modzero/zerofind.hpp"

namespace modzero {

/// (3/pi)(x_hi - x_lo)(1/y_lo - 1/y_hi); y_hi may be infinite.
double hyper_volume(const BoxRegion& box);

/// Normalized volume of the part of the box inside F, by 1-D quadrature over x
/// of the arc-clipped y-range. The full domain gives 1.
double hyper_volume_in_F(const BoxRegion& box);

/// [-1/2, 1/2] x [1/2, inf), which clips to all of F.
BoxRegion fundamental_domain_box();

/// Weighted share of zeros in the box: sum w * mult / nu. Throws EmptyZeroSet when nu = 0.
mpq_class empirical_measure(const ZeroSet& zs, const BoxRegion& box);

/// nx by ny boxes on [-1/2, 1/2] x [sqrt(3)/2, 3] plus the cell y >= 3.
///
/// The lowest row starts slightly below sqrt(3)/2 so that zeros computed at rho
/// are not lost to rounding; clipping to F leaves its volume unchanged.
std::vector<BoxRegion> default_grid(int nx = 6, int ny = 6);

/// Parses "NXxNY", e.g. "6x6".
std::vector<BoxRegion> grid_from_spec(const std::string& spec);

/// max over boxes of |empirical - clipped volume|.
double discrepancy(const ZeroSet& zs, const std::vector<BoxRegion>& grid);

/// Star discrepancy of zero angles on the arc from i to rho against the uniform
/// law in angle, zeros weighted by w * mult / nu.
double angular_star_discrepancy(const ZeroSet& zs);

struct MeasureRow {
  int box_id = 0;
  BoxRegion box;
  double empirical = 0;
  double volume = 0;
  double diff = 0;
};

struct MeasureReport {
  int weight = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  std::vector<MeasureRow> rows;
  double sup_diff = 0;
  /// "ok", or the reason the rows are empty (e.g. "empty-zero-set").
  std::string status = "ok";

  std::string id() const;
};

MeasureReport zero_measure_report(const ZeroSet& zs, const std::vector<BoxRegion>& grid);

/// sum_{n} |a(n)|^2 Gamma(k-1, 4 pi n Y) / (4 pi n)^(k-1), the integral of
/// y^k |f|^2 dx dy / y^2 over [0,1] x [Y, inf).
long double cusp_tail_mass(const FormNumeric& f, double Y);

/// Height Y beyond which the remaining mass, bounded through the coefficient
/// growth model, is below eps/2 of the mass above y = 1.
double cusp_cutoff(const FormNumeric& f, double eps);

/// <f, f> over F: adaptive quadrature of the part below y = 1, and above it the
/// exact sum over n of |a(n)|^2 Gamma(k-1, 4 pi n) / (4 pi n)^(k-1).
/// Throws InvalidArgument for non-cusp forms.
long double petersson_norm(const FormNumeric& f, double eps = 1e-10);

struct InnerProduct {
  long double re = 0;
  long double im = 0;
};

InnerProduct petersson_inner_product(const FormNumeric& f, const FormNumeric& g, double eps = 1e-10);

/// sum_{n >= 1} |a(n)|^2 Gamma(k-1, n) / (4 pi n)^(k-1). Throws
/// InsufficientTruncation when the coefficient-bound tail is not negligible.
long double siegel_norm_coefficient_sum(const FormNumeric& f);

/// Coefficients a normalized eigenform of weight k needs for
/// siegel_norm_coefficient_sum to certify its tail.
int siegel_truncation(int k);

/// Direct quadrature of |f|^2 y^k dx dy / y^2 over [0,1] x (1/(4 pi), inf).
long double siegel_norm_quadrature(const FormNumeric& f, double eps = 1e-10);

/// Integral over the box (clipped to F) of y^k |f|^2 / <f, f> dx dy / y^2;
/// the whole of F gives 1. Requires f.petersson_norm.
long double mass_measure(const FormNumeric& f, const BoxRegion& box, double eps = 1e-8);

MeasureReport mass_measure_report(const FormNumeric& f, const std::vector<BoxRegion>& grid, double eps = 1e-8);

}  // namespace modzero
