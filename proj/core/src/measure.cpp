#include "modzero/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "modzero/errors.hpp"
#include "modzero/incgamma.hpp"
#include "modzero/quadrature.hpp"

namespace modzero {
namespace {

constexpr double kThreeOverPi = 0.95492965855137201461;
constexpr long double kFourPi = 12.566370614359172953850573533118L;
constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

long double log_add(long double a, long double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double arc(double x) { return std::sqrt(std::max(0.0, 1 - x * x)); }

bool full_width(const BoxRegion& box) { return box.x_lo <= -0.5 && box.x_hi >= 0.5; }

void require_cusp_form(const FormNumeric& f, const char* what) {
  if (f.ord_infinity < 1) throw InvalidArgument(std::string(what) + ": " + f.id() + " is not a cusp form");
}

// ln of sum over n of exp(2 ln|a(n)| + ln Gamma(k-1, 4 pi n Y) - (k-1) ln(4 pi n)),
// with either the actual coefficients or the growth bound.
long double log_tail_sum(const FormNumeric& f, double Y, bool use_bound, int extra_terms) {
  const int k = f.weight;
  const auto bound = coefficient_bound(f);
  long double total = kNegInf;
  const int last = use_bound ? f.trunc() + extra_terms : f.trunc();
  for (int n = std::max(f.ord_infinity, 1); n <= last; ++n) {
    const long double log_a = use_bound ? bound.log_bound(n) : log_abs_double(f[n]);
    if (log_a == kNegInf) continue;
    const long double x = kFourPi * n * Y;
    const long double t = 2 * log_a + log_gamma_inc(k - 1, x) - (k - 1) * std::log(kFourPi * n);
    total = log_add(total, t);
    if (use_bound && n > f.trunc() && t < total - 80) break;
  }
  return total;
}

// Bound on the terms beyond the computed coefficients, relative to the computed sum.
void check_tail(const FormNumeric& f, double Y, long double log_sum, const char* what) {
  const int k = f.weight;
  const auto bound = coefficient_bound(f);
  long double tail = kNegInf;
  for (int n = f.trunc() + 1; n <= f.trunc() + 4000; ++n) {
    const long double t =
        2 * bound.log_bound(n) + log_gamma_inc(k - 1, kFourPi * n * Y) - (k - 1) * std::log(kFourPi * n);
    tail = log_add(tail, t);
    if (t < tail - 60) break;
  }
  if (tail - log_sum > std::log(1e-13L)) {
    throw InsufficientTruncation(std::string(what) + ": " + std::to_string(f.trunc()) +
                                 " coefficients leave a tail above 1e-13");
  }
}

// Maximum of a log integrand over sample points of a box clipped to F.
template <class G>
long double sample_peak(const BoxRegion& box, G&& g, bool clip) {
  long double peak = kNegInf;
  const int nx = 17, ny = 33;
  for (int j = 0; j < ny; ++j) {
    const double t = static_cast<double>(j) / (ny - 1);
    const double y = box.y_lo * std::pow(box.y_hi / box.y_lo, t);
    for (int i = 0; i < nx; ++i) {
      const double x = box.x_lo + (box.x_hi - box.x_lo) * i / (nx - 1);
      if (clip && y < arc(x)) continue;
      peak = std::max(peak, g(x, y));
    }
  }
  return peak;
}

}  // namespace

double hyper_volume(const BoxRegion& box) {
  box.validate();
  const double inv_hi = std::isinf(box.y_hi) ? 0.0 : 1.0 / box.y_hi;
  return kThreeOverPi * (box.x_hi - box.x_lo) * (1.0 / box.y_lo - inv_hi);
}

double hyper_volume_in_F(const BoxRegion& box) {
  box.validate();
  const double xa = std::max(box.x_lo, -0.5), xb = std::min(box.x_hi, 0.5);
  if (!(xb > xa)) return 0;
  const double inv_hi = std::isinf(box.y_hi) ? 0.0 : 1.0 / box.y_hi;
  auto width = [&](long double x) -> long double {
    const long double lo = std::max<long double>(box.y_lo, arc(static_cast<double>(x)));
    const long double v = 1 / lo - inv_hi;
    return v > 0 ? v : 0;
  };
  std::vector<double> cuts{xa, xb};
  for (double y : {box.y_lo, box.y_hi}) {
    if (y < 1) {
      const double c = std::sqrt(1 - y * y);
      for (double s : {-c, c}) {
        if (s > xa && s < xb) cuts.push_back(s);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  long double total = 0;
  for (std::size_t i = 1; i < cuts.size(); ++i) total += gk_integrate(width, cuts[i - 1], cuts[i], 1e-14);
  return static_cast<double>(kThreeOverPi * total);
}

BoxRegion fundamental_domain_box() { return {-0.5, 0.5, 0.5, std::numeric_limits<double>::infinity()}; }

mpq_class empirical_measure(const ZeroSet& zs, const BoxRegion& box) {
  box.validate();
  if (zs.nu == 0) throw EmptyZeroSet("empirical_measure: " + zs.id() + " has no zeros in F");
  mpq_class total = 0;
  for (const auto& r : zs.records) {
    if (box.contains(r.point.x, r.point.y)) total += r.stab_weight * r.multiplicity;
  }
  return total / zs.nu;
}

std::vector<BoxRegion> default_grid(int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidArgument("default_grid: need at least one bin per axis");
  const double y0 = std::sqrt(3.0) / 2, y1 = 3.0;
  std::vector<BoxRegion> grid;
  for (int j = 0; j < ny; ++j) {
    double lo = y0 + (y1 - y0) * j / ny;
    const double hi = y0 + (y1 - y0) * (j + 1) / ny;
    if (j == 0) lo = 0.85;
    for (int i = 0; i < nx; ++i) {
      grid.push_back({-0.5 + static_cast<double>(i) / nx, -0.5 + static_cast<double>(i + 1) / nx, lo, hi});
    }
  }
  grid.push_back({-0.5, 0.5, y1, std::numeric_limits<double>::infinity()});
  return grid;
}

std::vector<BoxRegion> grid_from_spec(const std::string& spec) {
  static const std::regex pattern(R"((\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern)) throw InvalidArgument("grid spec must look like 6x6, got '" + spec + "'");
  return default_grid(std::stoi(m[1].str()), std::stoi(m[2].str()));
}

double discrepancy(const ZeroSet& zs, const std::vector<BoxRegion>& grid) {
  double worst = 0;
  for (const auto& box : grid) {
    worst = std::max(worst, std::fabs(empirical_measure(zs, box).get_d() - hyper_volume_in_F(box)));
  }
  return worst;
}

double angular_star_discrepancy(const ZeroSet& zs) {
  if (zs.nu == 0) throw EmptyZeroSet("angular_star_discrepancy: " + zs.id() + " has no zeros in F");
  struct Mark {
    double t;
    double weight;
  };
  std::vector<Mark> marks;
  for (const auto& r : zs.records) {
    // Angle from i (t = 0) to rho (t = 1); arc zeros are reduced to x <= 0.
    const double theta = std::atan2(r.point.y, r.point.x);
    const double t = std::clamp((theta - M_PI / 2) / (M_PI / 6), 0.0, 1.0);
    marks.push_back({t, mpq_class(r.stab_weight * r.multiplicity / zs.nu).get_d()});
  }
  std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) { return a.t < b.t; });
  double cdf = 0, worst = 0;
  for (const auto& m : marks) {
    worst = std::max(worst, std::fabs(cdf - m.t));
    cdf += m.weight;
    worst = std::max(worst, std::fabs(cdf - m.t));
  }
  return worst;
}

std::string MeasureReport::id() const {
  std::string s = "k" + std::to_string(weight) + "_" + to_string(kind);
  if (eigen_index) s += std::to_string(*eigen_index);
  return s;
}

MeasureReport zero_measure_report(const ZeroSet& zs, const std::vector<BoxRegion>& grid) {
  MeasureReport report;
  report.weight = zs.weight;
  report.kind = zs.kind;
  report.eigen_index = zs.eigen_index;
  if (zs.nu == 0) {
    report.status = "empty-zero-set";
    return report;
  }
  for (std::size_t b = 0; b < grid.size(); ++b) {
    MeasureRow row;
    row.box_id = static_cast<int>(b);
    row.box = grid[b];
    row.empirical = empirical_measure(zs, grid[b]).get_d();
    row.volume = hyper_volume_in_F(grid[b]);
    row.diff = row.empirical - row.volume;
    report.sup_diff = std::max(report.sup_diff, std::fabs(row.diff));
    report.rows.push_back(row);
  }
  return report;
}

long double cusp_tail_mass(const FormNumeric& f, double Y) {
  require_cusp_form(f, "cusp_tail_mass");
  if (!(Y > 0)) throw InvalidArgument("cusp_tail_mass: Y must be positive");
  const long double s = log_tail_sum(f, Y, false, 0);
  check_tail(f, Y, s, "cusp_tail_mass");
  return std::exp(s);
}

double cusp_cutoff(const FormNumeric& f, double eps) {
  require_cusp_form(f, "cusp_cutoff");
  if (!(eps > 0)) throw InvalidArgument("cusp_cutoff: eps must be positive");
  const long double reference = log_tail_sum(f, 1.0, false, 0);
  const double start = std::max(1.0, f.weight / (4 * M_PI));
  for (double Y = start;; Y += 0.25) {
    if (log_tail_sum(f, Y, true, 2000) <= reference + std::log(eps / 2)) return Y;
    if (Y > 1e4) throw NonConvergence("cusp_cutoff: no cutoff found");
  }
}

long double petersson_norm(const FormNumeric& f, double eps) {
  require_cusp_form(f, "petersson_norm");
  const FastEvaluator fe(f);
  const int k = f.weight;
  auto g = [&](long double x, long double y) { return (k - 2) * std::log(y) + 2 * fe.eval(x, y).log_abs; };
  // Below y = 1 by quadrature; above it Parseval in x leaves a sum of incomplete gammas.
  const BoxRegion region{-0.5, 0.5, 0.5, 1.0};
  const long double shift = sample_peak(region, g, true);
  const long double body = integrate_box_in_F(region, [&](long double x, long double y) { return std::exp(g(x, y) - shift); }, eps);
  return body * std::exp(shift) + cusp_tail_mass(f, 1.0);
}

InnerProduct petersson_inner_product(const FormNumeric& f, const FormNumeric& h, double eps) {
  require_cusp_form(f, "petersson_inner_product");
  require_cusp_form(h, "petersson_inner_product");
  if (f.weight != h.weight) throw InvalidArgument("petersson_inner_product: weights differ");
  const int k = f.weight;
  const FastEvaluator ff(f), fh(h);
  auto part = [&](long double x, long double y) {
    const auto a = ff.eval(x, y);
    const auto b = fh.eval(x, y);
    return std::pair<long double, long double>{(k - 2) * std::log(y) + a.log_abs + b.log_abs, a.phase - b.phase};
  };
  const BoxRegion region{-0.5, 0.5, 0.5, 1.0};
  const long double shift = sample_peak(region, [&](double x, double y) { return part(x, y).first; }, true);
  InnerProduct ip;
  ip.re = std::exp(shift) * integrate_box_in_F(region, [&](long double x, long double y) {
            const auto [l, p] = part(x, y);
            return std::exp(l - shift) * std::cos(p);
          }, eps);
  ip.im = std::exp(shift) * integrate_box_in_F(region, [&](long double x, long double y) {
            const auto [l, p] = part(x, y);
            return std::exp(l - shift) * std::sin(p);
          }, eps);
  // Above y = 1 the x-integral is sum a(n) b(n) e^(-4 pi n y) by orthogonality of e(nx).
  long double tail = 0;
  const int last = std::min(f.trunc(), h.trunc());
  for (int n = 1; n <= last; ++n) {
    const long double ab = mpfr_get_ld(f[n].backend().data(), MPFR_RNDN) * mpfr_get_ld(h[n].backend().data(), MPFR_RNDN);
    if (ab == 0) continue;
    tail += ab * std::exp(log_gamma_inc(k - 1, kFourPi * n) - (k - 1) * std::log(kFourPi * n));
  }
  ip.re += tail;
  return ip;
}

long double siegel_norm_coefficient_sum(const FormNumeric& f) {
  require_cusp_form(f, "siegel_norm_coefficient_sum");
  const double Y = 1 / (4 * M_PI);
  const long double s = log_tail_sum(f, Y, false, 0);
  check_tail(f, Y, s, "siegel_norm_coefficient_sum");
  return std::exp(s);
}

int siegel_truncation(int k) {
  if (k < 12 || k % 2) throw InvalidArgument("siegel_truncation: weight must be even and >= 12");
  const long double first = log_gamma_inc(k - 1, 1.0L) - (k - 1) * std::log(kFourPi);
  // Terms n^(k+1) Gamma(k-1, n) / (4 pi n)^(k-1) under Deligne, summed from the far end.
  std::vector<long double> terms;
  for (int n = 1;; ++n) {
    const long double t = (k + 1) * std::log(static_cast<long double>(n)) + log_gamma_inc(k - 1, static_cast<long double>(n)) -
                          (k - 1) * std::log(kFourPi * n);
    terms.push_back(t);
    if (n > k && t < first - 80) break;
  }
  long double tail = kNegInf;
  for (int n = static_cast<int>(terms.size()); n >= 1; --n) {
    if (tail - first > std::log(1e-14L)) return n + 1;
    tail = log_add(tail, terms[static_cast<std::size_t>(n - 1)]);
  }
  return 1;
}

long double siegel_norm_quadrature(const FormNumeric& f, double eps) {
  require_cusp_form(f, "siegel_norm_quadrature");
  const int k = f.weight;
  const long double reference = log_tail_sum(f, 1.0, true, 2000);
  double Y = std::max(1.0, k / (4 * M_PI));
  while (log_tail_sum(f, Y, true, 2000) > reference + std::log(eps * 1e-3)) Y += 0.25;
  const FastEvaluator fe(f);
  auto g = [&](long double x, long double y) { return (k - 2) * std::log(y) + 2 * fe.eval(x, y).log_abs; };
  const BoxRegion region{0.0, 1.0, 1 / (4 * M_PI), Y};
  const long double shift = sample_peak(region, g, false);
  return std::exp(shift) * integrate_box(region, [&](long double x, long double y) { return std::exp(g(x, y) - shift); }, eps);
}

long double mass_measure(const FormNumeric& f, const BoxRegion& box, double eps) {
  box.validate();
  if (!f.petersson_norm) throw InvalidArgument("mass_measure: Petersson norm not computed");
  require_cusp_form(f, "mass_measure");
  const long double log_norm = std::log(*f.petersson_norm);
  double top = box.y_hi;
  long double tail = 0;
  if (std::isinf(box.y_hi)) {
    top = std::max(cusp_cutoff(f, eps), box.y_lo);
    if (full_width(box)) {
      tail = std::exp(std::log(cusp_tail_mass(f, top)) - log_norm);
    }
  }
  const BoxRegion finite{box.x_lo, box.x_hi, box.y_lo, top};
  if (!(finite.y_hi > finite.y_lo) || std::min(box.x_hi, 0.5) <= std::max(box.x_lo, -0.5)) return tail;
  FastEvaluator fe(f);
  fe.set_log_norm(static_cast<double>(log_norm));
  auto g = [&](long double x, long double y) { return fe.log_mass(x, y) - 2 * std::log(y); };
  const BoxRegion clipped{std::max(box.x_lo, -0.5), std::min(box.x_hi, 0.5), std::max(box.y_lo, 0.5), top};
  long double shift = sample_peak(clipped, g, true);
  if (shift == kNegInf) shift = 0;
  return tail + std::exp(shift) * integrate_box_in_F(finite, [&](long double x, long double y) { return std::exp(g(x, y) - shift); }, eps);
}

MeasureReport mass_measure_report(const FormNumeric& f, const std::vector<BoxRegion>& grid, double eps) {
  MeasureReport report;
  report.weight = f.weight;
  report.kind = f.kind;
  report.eigen_index = f.eigen_index;
  for (std::size_t b = 0; b < grid.size(); ++b) {
    MeasureRow row;
    row.box_id = static_cast<int>(b);
    row.box = grid[b];
    row.empirical = static_cast<double>(mass_measure(f, grid[b], eps));
    row.volume = hyper_volume_in_F(grid[b]);
    row.diff = row.empirical - row.volume;
    report.sup_diff = std::max(report.sup_diff, std::fabs(row.diff));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace modzero
