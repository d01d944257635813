#include "modzero/incgamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modzero/errors.hpp"
#include "modzero/measure.hpp"

namespace modzero {
namespace {

template <class T>
T log_partial_sum_impl(const T& x, long n, const T& eps) {
  using std::floor;
  using std::log;
  using std::lgamma;
  if (n < 0) return T(-std::numeric_limits<double>::infinity());
  if (x == 0) return T(0);
  const long peak = std::min<long>(n, static_cast<long>(floor(x)));
  const T log_peak = T(peak) * log(x) - lgamma(T(peak + 1));
  T sum = 1;
  T term = 1;
  for (long m = peak; m >= 1; --m) {
    term *= T(m) / x;
    sum += term;
    if (term < eps * sum) break;
  }
  term = 1;
  for (long m = peak + 1; m <= n; ++m) {
    term *= x / T(m);
    sum += term;
    if (term < eps * sum) break;
  }
  return log_peak + log(sum);
}

}  // namespace

Real log_exp_partial_sum(const Real& x, long n) {
  const int bits = std::max(precision_bits(x), 64);
  PrecisionScope scope(bits);
  return log_partial_sum_impl<Real>(x, n, pow(Real(2), -(bits + 8)));
}

long double log_exp_partial_sum(long double x, long n) {
  return log_partial_sum_impl<long double>(x, n, std::numeric_limits<long double>::epsilon() / 256);
}

Real log_gamma_inc(long a, const Real& x) {
  if (a < 1) throw InvalidArgument("log_gamma_inc: a must be >= 1");
  if (!(x > 0)) throw InvalidArgument("log_gamma_inc: x must be positive");
  PrecisionScope scope(std::max(precision_bits(x), 64));
  return lgamma(Real(a)) - x + log_exp_partial_sum(x, a - 1);
}

long double log_gamma_inc(long a, long double x) {
  if (a < 1) throw InvalidArgument("log_gamma_inc: a must be >= 1");
  if (!(x > 0)) throw InvalidArgument("log_gamma_inc: x must be positive");
  return std::lgamma(static_cast<long double>(a)) - x + log_exp_partial_sum(x, a - 1);
}

Real ratio_half(long k, int precision_bits) {
  if (k < 3) throw InvalidArgument("ratio_half: k must be >= 3");
  PrecisionScope scope(precision_bits);
  const Real kk(k);
  return exp(log_exp_partial_sum(kk, k - 2) - kk);
}

Real poisson_cdf_half(long k, int precision_bits) {
  if (k < 1) throw InvalidArgument("poisson_cdf_half: k must be >= 1");
  PrecisionScope scope(precision_bits);
  const Real kk(k);
  return exp(log_exp_partial_sum(kk, k) - kk);
}

Real ramanujan_theta(long k, int precision_bits) {
  if (k < 1) throw InvalidArgument("ramanujan_theta: k must be >= 1");
  for (int bits = precision_bits;; bits *= 2) {
    PrecisionScope scope(bits);
    const Real kk(k);
    const Real partial = exp(log_exp_partial_sum(kk, k - 1) - kk);
    const Real diff = Real(0.5) - partial;
    const bool cancelled = diff == 0 || log2(partial / abs(diff)) > bits / 2;
    if (cancelled && bits < 16 * precision_bits) continue;
    const Real theta = diff * exp(kk + lgamma(kk + 1) - kk * log(kk));
    return with_precision(theta, precision_bits);
  }
}

GammaIncReport gamma_report(long k, int precision_bits) {
  return {k, ratio_half(k, precision_bits), ramanujan_theta(k, precision_bits), poisson_cdf_half(k, precision_bits)};
}

namespace {

constexpr long double kFourPi = 12.566370614359172953850573533118L;

long double log_bound_term(int k, long double y, int n) {
  return -kFourPi * n * y + (k - 1) * std::log(kFourPi * n) - log_gamma_inc(k - 1, static_cast<long double>(n));
}

// ln of y^k (4 pi)^(k-1) sum_{n > N} n r^n with r = e^-(4 pi y - 1).
long double log_bound_tail(int k, long double y, int N) {
  const long double log_r = -(kFourPi * y - 1);
  const long double r = std::exp(log_r);
  return k * std::log(y) + (k - 1) * std::log(kFourPi) + (N + 1) * log_r + std::log((N + 1) - N * r) -
         2 * std::log1p(-r);
}

long double log_add(long double a, long double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<long double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

constexpr long double kTailRelative = -27.631021115928547L;  // ln 1e-12

}  // namespace

BoundSeriesValue bound_series(int k, double y, int N) {
  if (k < 3) throw InvalidArgument("bound_series: k must be >= 3");
  if (!(y >= std::sqrt(3.0) / 2 - 1e-12)) throw InvalidArgument("bound_series: y must be >= sqrt(3)/2");
  if (N < 1) throw InvalidArgument("bound_series: N must be >= 1");
  long double log_sum = -std::numeric_limits<long double>::infinity();
  for (int n = 1; n <= N; ++n) log_sum = log_add(log_sum, log_bound_term(k, y, n));
  BoundSeriesValue v;
  v.log_partial = k * std::log(static_cast<long double>(y)) + log_sum;
  v.log_tail = log_bound_tail(k, y, N);
  if (v.log_tail - v.log_partial > kTailRelative) {
    throw InsufficientTruncation("bound_series: tail not certified at N = " + std::to_string(N));
  }
  v.log_value = log_add(v.log_partial, v.log_tail);
  return v;
}

int bound_series_terms(int k, double y) {
  if (k < 3) throw InvalidArgument("bound_series: k must be >= 3");
  if (!(y >= std::sqrt(3.0) / 2 - 1e-12)) throw InvalidArgument("bound_series: y must be >= sqrt(3)/2");
  long double log_sum = -std::numeric_limits<long double>::infinity();
  const long double log_y = std::log(static_cast<long double>(y));
  for (int n = 1; n < 1000000; ++n) {
    log_sum = log_add(log_sum, log_bound_term(k, y, n));
    if (log_bound_tail(k, y, n) - (k * log_y + log_sum) <= kTailRelative) return n;
  }
  throw InsufficientTruncation("bound_series: no certified truncation found");
}

std::vector<UpperHalfPoint> rectangular_grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidArgument("rectangular_grid: need at least one point per axis");
  std::vector<UpperHalfPoint> out;
  out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    const double y = ny == 1 ? y_lo : y_lo + (y_hi - y_lo) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1);
      out.push_back({x, y});
    }
  }
  return out;
}

std::vector<UpperHalfPoint> default_sup_grid() { return rectangular_grid(-0.5, 0.5, std::sqrt(3.0) / 2, 3.0, 33, 33); }

SupMassResult sup_mass_experiment(const std::vector<FormNumeric>& forms, const std::vector<UpperHalfPoint>& grid) {
  if (grid.empty()) throw InvalidArgument("sup_mass_experiment: empty grid");
  SupMassResult result;
  for (const auto& f : forms) {
    if (!f.petersson_norm) throw InvalidArgument("sup_mass_experiment: " + f.id() + " has no Petersson norm");
    FastEvaluator fe(f);
    const long double log_norm = std::log(*f.petersson_norm);
    fe.set_log_norm(static_cast<double>(log_norm));
    long double log_siegel = std::numeric_limits<long double>::quiet_NaN();
    try {
      log_siegel = std::log(siegel_norm_coefficient_sum(f));
    } catch (const InsufficientTruncation&) {
    }

    SupMassRow row;
    row.form_id = f.id();
    row.weight = f.weight;
    row.kind = f.kind;
    row.eigen_index = f.eigen_index;
    row.siegel_over_petersson = std::exp(log_siegel - log_norm);
    long double best = -std::numeric_limits<long double>::infinity();
    long double worst_ratio = -std::numeric_limits<long double>::infinity();
    long double worst_siegel = -std::numeric_limits<long double>::infinity();
    double cached_y = -1;
    long double log_bound = 0;
    for (const auto& z : grid) {
      const long double lm = fe.log_mass(z.x, z.y);
      if (lm > best) {
        best = lm;
        row.argmax = z;
      }
      if (z.y != cached_y) {
        cached_y = z.y;
        log_bound = bound_series(f.weight, z.y, bound_series_terms(f.weight, z.y)).log_value;
      }
      worst_ratio = std::max(worst_ratio, lm - log_bound);
      worst_siegel = std::max(worst_siegel, lm + log_norm - log_siegel - log_bound);
    }
    row.sup = std::exp(best);
    row.max_ratio_to_bound = std::exp(worst_ratio);
    row.max_siegel_ratio_to_bound = std::exp(worst_siegel);
    result.rows.push_back(row);
  }
  if (result.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(result.rows.size());
    for (const auto& r : result.rows) {
      const double lx = std::log(static_cast<double>(r.weight));
      const double ly = static_cast<double>(std::log(r.sup));
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    result.slope = den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
  }
  return result;
}

}  // namespace modzero
