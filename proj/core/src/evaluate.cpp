#include "modzero/evaluate.hpp"

#include <algorithm>
#include <limits>
#include <span>

#include <mpfr.h>

#include "modzero/errors.hpp"

namespace modzero {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct NeumaierSum {
  Real sum = 0;
  Real comp = 0;
  void add(const Real& v) {
    const Real t = sum + v;
    if (abs(sum) >= abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  Real value() const { return sum + comp; }
};

// Tail certificate shared by the Real and long double paths.
int certified_cutoff(std::span<const double> log_coeffs, int first, const CoefficientBound& bound, double y,
                     double eps_log, int limit) {
  double peak = -std::numeric_limits<double>::infinity();
  const int last = static_cast<int>(log_coeffs.size()) - 1;
  for (int n = first; n <= last; ++n) peak = std::max(peak, log_coeffs[static_cast<std::size_t>(n)] - kTwoPi * n * y);
  if (!std::isfinite(peak)) return first;
  for (int N = std::max(first, 0); N <= limit; ++N) {
    const int m = N + 1;
    const double log_ratio = bound.beta * std::log1p(1.0 / m) - kTwoPi * y;
    if (log_ratio >= 0) continue;
    const double tail = bound.log_bound(m) - kTwoPi * m * y - std::log(-std::expm1(log_ratio));
    if (tail <= peak + eps_log) return N;
  }
  return limit + 1;
}

std::vector<double> log_coefficients(const FormNumeric& f) {
  std::vector<double> out;
  out.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) out.push_back(log_abs_double(c));
  return out;
}

}  // namespace

void BoxRegion::validate() const {
  if (!(x_lo <= x_hi) || !(y_lo > 0) || !(y_lo <= y_hi)) {
    throw InvalidArgument("BoxRegion: need x_lo <= x_hi and 0 < y_lo <= y_hi");
  }
}

double log_abs_double(const Real& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, x.backend().data(), MPFR_RNDN);
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * 0.69314718055994530942;
}

CoefficientBound coefficient_bound(const FormNumeric& f) {
  const int k = f.weight;
  switch (f.kind) {
    case FormKind::Eigenform:
      return {0.0, (k + 1) / 2.0};
    case FormKind::Eisenstein:
      return {log_abs_double(f.trunc() >= 1 ? f[1] : Real(1)) + std::log(2.0), k - 1.0};
    case FormKind::Custom:
      break;
  }
  const double beta = std::max(k - 1.0, 0.0);
  double alpha = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= f.trunc(); ++n) alpha = std::max(alpha, log_abs_double(f[n]) - beta * std::log(n));
  if (!std::isfinite(alpha)) alpha = -1e6;
  return {alpha + std::log(10.0), beta};
}

int tail_terms_needed(const FormNumeric& f, double y_min, double eps_log) {
  if (!(y_min > 0)) throw InvalidArgument("tail_terms_needed: y_min must be positive");
  const auto logs = log_coefficients(f);
  const int N = certified_cutoff(logs, f.ord_infinity, coefficient_bound(f), y_min, eps_log, f.trunc());
  if (N > f.trunc()) {
    throw InsufficientTruncation("tail_terms_needed: " + std::to_string(f.trunc()) +
                                 " coefficients do not certify y = " + std::to_string(y_min));
  }
  return N;
}

namespace {

LogValue<Real> eval_direct(const FormNumeric& f, const HalfPlanePoint<Real>& z, int N) {
  PrecisionScope scope(f.precision_bits);
  const Real two_pi = 2 * real_pi();
  const Real radius = exp(-two_pi * z.y);
  const Real qr = radius * cos(two_pi * z.x);
  const Real qi = radius * sin(two_pi * z.x);
  Real pr = 1, pi = 0;
  for (int n = 0; n < f.ord_infinity; ++n) {
    const Real t = pr * qr - pi * qi;
    pi = pr * qi + pi * qr;
    pr = t;
  }
  NeumaierSum re, im;
  for (int n = f.ord_infinity; n <= N; ++n) {
    if (f[n] != 0) {
      re.add(f[n] * pr);
      im.add(f[n] * pi);
    }
    const Real t = pr * qr - pi * qi;
    pi = pr * qi + pi * qr;
    pr = t;
  }
  const Real sr = re.value(), si = im.value();
  const Real mod2 = sr * sr + si * si;
  if (mod2 == 0) return {Real(-std::numeric_limits<double>::infinity()), Real(0)};
  LogValue<Real> out{log(mod2) / 2, atan2(si, sr)};
  if (out.log_abs < kLogFloor) out.phase = 0;
  return out;
}

Real wrap_phase(Real phase) {
  const Real pi = real_pi();
  while (phase <= -pi) phase += 2 * pi;
  while (phase > pi) phase -= 2 * pi;
  return phase;
}

}  // namespace

LogValue<Real> eval_log(const FormNumeric& f, const HalfPlanePoint<Real>& z) {
  if (!(z.y > 0)) throw InvalidArgument("eval_log: point not in the upper half-plane");
  const double eps_log = -f.precision_bits * 0.69314718055994530942;
  const auto logs = log_coefficients(f);
  const auto bound = coefficient_bound(f);
  const int direct = certified_cutoff(logs, f.ord_infinity, bound, static_cast<double>(z.y), eps_log, f.trunc());
  if (direct <= f.trunc()) return eval_direct(f, z, direct);

  PrecisionScope scope(f.precision_bits);
  const auto red = reduce_to_fundamental(z);
  const int N = certified_cutoff(logs, f.ord_infinity, bound, static_cast<double>(red.point.y), eps_log, f.trunc());
  if (N > f.trunc()) {
    throw InsufficientTruncation("eval_log: " + std::to_string(f.trunc()) + " coefficients do not reach F");
  }
  auto v = eval_direct(f, red.point, N);
  const auto j = automorphy_log(red.gamma, z);
  v.log_abs -= f.weight * j.log_abs;
  v.phase = v.log_abs < kLogFloor ? Real(0) : wrap_phase(v.phase - f.weight * j.phase);
  return v;
}

LogValue<Real> eval_log(const FormNumeric& f, const UpperHalfPoint& z) {
  PrecisionScope scope(f.precision_bits);
  return eval_log(f, HalfPlanePoint<Real>{Real(z.x), Real(z.y)});
}

Real log_mass(const FormNumeric& f, const HalfPlanePoint<Real>& z) {
  if (!f.petersson_norm) throw InvalidArgument("log_mass: Petersson norm not computed");
  const auto v = eval_log(f, z);
  PrecisionScope scope(f.precision_bits);
  return f.weight * log(z.y) + 2 * v.log_abs - log(Real(*f.petersson_norm));
}

Real log_mass(const FormNumeric& f, const UpperHalfPoint& z) {
  PrecisionScope scope(f.precision_bits);
  return log_mass(f, HalfPlanePoint<Real>{Real(z.x), Real(z.y)});
}

Real v_k(const FormNumeric& f, const HalfPlanePoint<Real>& z) {
  const auto v = eval_log(f, z);
  PrecisionScope scope(f.precision_bits);
  return 2 * v.log_abs / f.weight;
}

FastEvaluator::FastEvaluator(const FormNumeric& f, double eps_log)
    : weight_(f.weight), ord_(f.ord_infinity), bound_(coefficient_bound(f)), eps_log_(eps_log) {
  coeffs_.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) coeffs_.push_back(mpfr_get_ld(c.backend().data(), MPFR_RNDN));
  log_coeffs_ = log_coefficients(f);
  const int last = f.trunc();
  auto ok = [&](double y) { return certified_cutoff(log_coeffs_, ord_, bound_, y, eps_log_, last) <= last; };
  const double y_floor = std::sqrt(3.0) / 2 - 1e-9;
  if (!ok(y_floor)) {
    throw InsufficientTruncation("FastEvaluator: " + std::to_string(last) + " coefficients do not reach F");
  }
  double lo = 0.05, hi = y_floor;
  if (ok(lo)) {
    hi = lo;
  } else {
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
  }
  y_direct_ = hi;
}

LogValue<long double> FastEvaluator::eval_direct(long double x, long double y) const {
  const long double two_pi = 6.283185307179586476925286766559L;
  const std::complex<long double> q = std::polar(std::exp(-two_pi * y), two_pi * x);
  std::complex<long double> power = std::pow(q, ord_);
  std::complex<long double> sum = 0, comp = 0;
  double peak = -std::numeric_limits<double>::infinity();
  const int last = static_cast<int>(coeffs_.size()) - 1;
  for (int n = ord_; n <= last; ++n) {
    const double log_term = log_coeffs_[static_cast<std::size_t>(n)] - kTwoPi * n * static_cast<double>(y);
    peak = std::max(peak, log_term);
    if (n > bound_.beta / (kTwoPi * static_cast<double>(y)) + 1 &&
        bound_.log_bound(n) - kTwoPi * n * static_cast<double>(y) < peak + eps_log_ - 8) {
      break;
    }
    const std::complex<long double> term = coeffs_[static_cast<std::size_t>(n)] * power;
    const std::complex<long double> t = sum + term;
    const long double cr = std::fabs(sum.real()) >= std::fabs(term.real()) ? (sum.real() - t.real()) + term.real()
                                                                          : (term.real() - t.real()) + sum.real();
    const long double ci = std::fabs(sum.imag()) >= std::fabs(term.imag()) ? (sum.imag() - t.imag()) + term.imag()
                                                                          : (term.imag() - t.imag()) + sum.imag();
    comp += std::complex<long double>(cr, ci);
    sum = t;
    power *= q;
  }
  sum += comp;
  const long double mod = std::abs(sum);
  if (mod == 0) return {-std::numeric_limits<long double>::infinity(), 0};
  LogValue<long double> out{std::log(mod), std::arg(sum)};
  if (out.log_abs < kLogFloor) out.phase = 0;
  return out;
}

LogValue<long double> FastEvaluator::eval(long double x, long double y) const {
  if (!(y > 0)) throw InvalidArgument("FastEvaluator: point not in the upper half-plane");
  if (y >= y_direct_) return eval_direct(x, y);
  const auto red = reduce_to_fundamental(HalfPlanePoint<long double>{x, y});
  auto v = eval_direct(red.point.x, red.point.y);
  const auto j = automorphy_log(red.gamma, HalfPlanePoint<long double>{x, y});
  v.log_abs -= weight_ * j.log_abs;
  if (v.log_abs < kLogFloor) {
    v.phase = 0;
  } else {
    v.phase = std::remainder(v.phase - weight_ * j.phase, 2 * 3.14159265358979323846264338327950288L);
  }
  return v;
}

std::complex<long double> FastEvaluator::value(long double x, long double y) const {
  const auto v = eval(x, y);
  return std::polar(std::exp(v.log_abs), v.phase);
}

long double FastEvaluator::log_mass(long double x, long double y) const {
  return weight_ * std::log(y) + 2 * eval(x, y).log_abs - log_norm_;
}

}  // namespace modzero
