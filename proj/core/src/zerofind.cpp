#include "modzero/zerofind.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "modzero/errors.hpp"

namespace modzero {
namespace {

using CLD = std::complex<long double>;
constexpr long double kEpsLD = std::numeric_limits<long double>::epsilon();
constexpr double kLn2 = 0.69314718055994530942;

// Aberth-Ehrlich iteration for all roots of sum c[j] w^j.
class Aberth {
 public:
  explicit Aberth(std::vector<long double> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
    degree_ = static_cast<int>(c_.size()) - 1;
  }

  std::vector<CLD> solve(int max_iterations) {
    std::vector<CLD> w = initial_guesses();
    std::vector<bool> done(w.size(), false);
    for (int iter = 0; iter < max_iterations; ++iter) {
      bool all_done = true;
      for (int i = 0; i < degree_; ++i) {
        if (done[static_cast<std::size_t>(i)]) continue;
        all_done = false;
        bool small = false;
        const CLD ratio = newton_ratio(w[static_cast<std::size_t>(i)], small);
        if (small) {
          done[static_cast<std::size_t>(i)] = true;
          continue;
        }
        CLD sum = 0;
        for (int j = 0; j < degree_; ++j) {
          if (j != i) sum += 1.0L / (w[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(j)]);
        }
        const CLD step = ratio / (1.0L - ratio * sum);
        w[static_cast<std::size_t>(i)] -= step;
        if (std::abs(step) <= 4 * kEpsLD * std::abs(w[static_cast<std::size_t>(i)])) done[static_cast<std::size_t>(i)] = true;
      }
      if (all_done) break;
    }
    return w;
  }

 private:
  // P(w)/P'(w); sets small when |P(w)| is at the rounding level of the evaluation.
  CLD newton_ratio(CLD w, bool& small) const {
    const long double r = std::abs(w);
    CLD p = 0, dp = 0;
    long double bound = 0;
    if (r <= 1) {
      for (int j = degree_; j >= 0; --j) {
        dp = dp * w + p;
        p = p * w + c_[static_cast<std::size_t>(j)];
        bound = bound * r + std::fabs(c_[static_cast<std::size_t>(j)]);
      }
      small = std::abs(p) <= 8 * degree_ * kEpsLD * bound;
      return p / dp;
    }
    const CLD v = 1.0L / w;
    const long double rv = 1 / r;
    for (int j = 0; j <= degree_; ++j) {
      dp = dp * v + p;
      p = p * v + c_[static_cast<std::size_t>(j)];
      bound = bound * rv + std::fabs(c_[static_cast<std::size_t>(j)]);
    }
    small = std::abs(p) <= 8 * degree_ * kEpsLD * bound;
    return w * p / (static_cast<long double>(degree_) * p - v * dp);
  }

  // Radii from the upper convex hull of (j, ln|c_j|).
  std::vector<CLD> initial_guesses() const {
    std::vector<std::pair<int, long double>> pts;
    for (int j = 0; j <= degree_; ++j) {
      if (c_[static_cast<std::size_t>(j)] != 0) pts.emplace_back(j, std::log(std::fabs(c_[static_cast<std::size_t>(j)])));
    }
    std::vector<std::pair<int, long double>> hull;
    for (const auto& p : pts) {
      while (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        const long double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
        if (cross >= 0) {
          hull.pop_back();
        } else {
          break;
        }
      }
      hull.push_back(p);
    }
    std::vector<CLD> w;
    w.reserve(static_cast<std::size_t>(degree_));
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t s = 1; s < hull.size(); ++s) {
      const int len = hull[s].first - hull[s - 1].first;
      const long double radius = std::exp(-(hull[s].second - hull[s - 1].second) / len);
      for (int m = 0; m < len; ++m) {
        const long double angle = two_pi * m / len + two_pi * static_cast<long double>(s) / degree_ + 0.7L;
        w.push_back(std::polar(radius, angle));
      }
    }
    return w;
  }

  std::vector<long double> c_;
  int degree_ = 0;
};

struct Polish {
  Real re, im;
  Real residual;  // relative residual |P| / sum |a_n q^n|
};

// P(q) and P'(q) for P(q) = sum_{n=first}^{last} a(n) q^(n-first).
void horner(const FormNumeric& f, int first, int last, const Real& qr, const Real& qi, Real& pr, Real& pi, Real& dr,
            Real& di, Real& scale) {
  pr = 0, pi = 0, dr = 0, di = 0, scale = 0;
  const Real qa = sqrt(qr * qr + qi * qi);
  for (int n = last; n >= first; --n) {
    Real t = dr * qr - di * qi + pr;
    di = dr * qi + di * qr + pi;
    dr = t;
    t = pr * qr - pi * qi + f[n];
    pi = pr * qi + pi * qr;
    pr = t;
    scale = scale * qa + abs(f[n]);
  }
}

Real relative_residual(const FormNumeric& f, int first, int last, const Real& qr, const Real& qi) {
  Real pr, pi, dr, di, scale;
  horner(f, first, last, qr, qi, pr, pi, dr, di, scale);
  return sqrt(pr * pr + pi * pi) / scale;
}

Polish newton(const FormNumeric& f, int first, int last, Real qr, Real qi, int multiplicity, int max_iterations) {
  const Real tol = pow(Real(2), -(f.precision_bits - 20));
  Real pr, pi, dr, di, scale;
  for (int iter = 0; iter < max_iterations; ++iter) {
    horner(f, first, last, qr, qi, pr, pi, dr, di, scale);
    const Real den = dr * dr + di * di;
    if (den == 0) break;
    const Real sr = multiplicity * (pr * dr + pi * di) / den;
    const Real si = multiplicity * (pi * dr - pr * di) / den;
    qr -= sr;
    qi -= si;
    if (sqrt(sr * sr + si * si) <= tol * sqrt(qr * qr + qi * qi)) break;
  }
  return {qr, qi, relative_residual(f, first, last, qr, qi)};
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

int ord_infinity(const FormNumeric& f) {
  const double log_r = -M_PI * std::sqrt(3.0);
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(f.coeffs.size());
  for (int n = 0; n <= f.trunc(); ++n) {
    terms.push_back(log_abs_double(f[n]) + n * log_r);
    peak = std::max(peak, terms.back());
  }
  if (!std::isfinite(peak)) throw InvalidArgument("ord_infinity: all coefficients vanish");
  const double floor = peak - 0.5 * f.precision_bits * kLn2;
  for (int n = 0; n <= f.trunc(); ++n) {
    if (terms[static_cast<std::size_t>(n)] > floor) return n;
  }
  return f.trunc();
}

Real default_qdisk_radius(double margin) { return exp(-real_pi() * sqrt(Real(3))) * (1 + Real(margin)); }

std::vector<QRoot> roots_in_qdisk(const FormNumeric& f, const Real& radius, int precision_bits,
                                  const ZeroFindOptions& options) {
  if (!(radius > 0)) throw InvalidArgument("roots_in_qdisk: radius must be positive");
  const int ord = f.ord_infinity;
  const double y_disk = -log_abs_double(radius) / (2 * M_PI);
  const int low = std::max(tail_terms_needed(f, y_disk, -0.5 * precision_bits * kLn2), ord + 1);
  const int high = std::max(static_cast<int>(std::ceil(1.25 * low)), tail_terms_needed(f, y_disk, -precision_bits * kLn2));
  if (high > f.trunc()) {
    throw InsufficientTruncation("roots_in_qdisk: need " + std::to_string(high) + " coefficients, have " +
                                 std::to_string(f.trunc()));
  }

  PrecisionScope scope(precision_bits);
  FormNumeric g = f;
  g.precision_bits = precision_bits;

  const long double r_ld = mpfr_get_ld(radius.backend().data(), MPFR_RNDN);
  std::vector<long double> scaled;
  for (int n = ord; n <= low; ++n) {
    long exponent = 0;
    const double mant = mpfr_get_d_2exp(&exponent, f[n].backend().data(), MPFR_RNDN);
    const long double log_scale = static_cast<long double>(exponent) * std::log(2.0L) + (n - ord) * std::log(r_ld);
    scaled.push_back(mant * std::exp(log_scale));
  }
  const auto candidates = Aberth(scaled).solve(options.max_iterations);

  struct Accepted {
    Real qr, qi;
  };
  std::vector<Accepted> accepted;
  const Real limit = radius * (1 + Real(1e-9));
  for (const auto& w : candidates) {
    if (std::abs(w) > 1 + 1e-6L) continue;
    const Real q0r = radius * Real(w.real());
    const Real q0i = radius * Real(w.imag());
    const Real r0 = relative_residual(g, ord, high, q0r, q0i);
    Polish p = newton(g, ord, high, q0r, q0i, 1, options.max_iterations);
    const Real moved = sqrt((p.re - q0r) * (p.re - q0r) + (p.im - q0i) * (p.im - q0i));
    const Real size = sqrt(p.re * p.re + p.im * p.im);
    if (p.residual > r0 || moved > Real(0.05) * radius || size > limit) continue;
    accepted.push_back({p.re, p.im});
  }

  std::vector<std::size_t> parent(accepted.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const Real cluster = Real(options.cluster_tol);
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    for (std::size_t j = i + 1; j < accepted.size(); ++j) {
      const Real dr = accepted[i].qr - accepted[j].qr, di = accepted[i].qi - accepted[j].qi;
      if (sqrt(dr * dr + di * di) < cluster) parent[find_root(parent, i)] = find_root(parent, j);
    }
  }

  std::vector<QRoot> roots;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (find_root(parent, i) != i) continue;
    Real sr = 0, si = 0;
    int m = 0;
    for (std::size_t j = 0; j < accepted.size(); ++j) {
      if (find_root(parent, j) == i) {
        sr += accepted[j].qr;
        si += accepted[j].qi;
        ++m;
      }
    }
    sr /= m;
    si /= m;
    Polish p = m == 1 ? Polish{sr, si, relative_residual(g, ord, high, sr, si)}
                      : newton(g, ord, high, sr, si, m, 20);
    QRoot root;
    root.q = Complex(p.re, p.im);
    root.multiplicity = m;
    root.residual_log = p.residual == 0 ? -std::numeric_limits<double>::infinity() : log_abs_double(p.residual);
    const Real size = sqrt(p.re * p.re + p.im * p.im);
    root.near_boundary = abs(size / radius - 1) < Real(options.radius_margin);
    roots.push_back(std::move(root));
  }
  return roots;
}

std::string ZeroSet::id() const {
  std::string s = "k" + std::to_string(weight) + "_" + to_string(kind);
  if (eigen_index) s += std::to_string(*eigen_index);
  return s;
}

ZeroSet zeros_in_F(const FormNumeric& f, const ZeroFindOptions& options) {
  ZeroSet zs;
  zs.weight = f.weight;
  zs.kind = f.kind;
  zs.eigen_index = f.eigen_index;
  zs.ord_infinity = f.ord_infinity;

  PrecisionScope scope(f.precision_bits);
  const auto roots = roots_in_qdisk(f, default_qdisk_radius(options.radius_margin), f.precision_bits, options);

  struct Candidate {
    HalfPlanePoint<Real> z;
    int multiplicity;
    double residual_log;
  };
  std::vector<Candidate> reduced;
  const Real merge = Real(options.merge_tol);
  const Real two_pi = 2 * real_pi();
  for (const auto& r : roots) {
    Real x = atan2(r.q.imag(), r.q.real()) / two_pi;
    if (x >= Real(0.5)) x -= 1;
    const Real y = -log(abs(r.q)) / two_pi;
    auto z = reduce_to_fundamental(HalfPlanePoint<Real>{x, y}).point;
    // Numerical ties: points on the line x = 1/2 or on the arc with x > 0 are
    // moved to their partners on the left edge.
    if (Real(0.5) - z.x < merge * z.y) z.x -= 1;
    if (z.x > 0 && abs(sqrt(z.x * z.x + z.y * z.y) - 1) < merge * z.y) z = GroupElement::inversion().apply(z);
    reduced.push_back({z, r.multiplicity, r.residual_log});
  }

  auto equivalent = [&](const HalfPlanePoint<Real>& a, const HalfPlanePoint<Real>& b) {
    const HalfPlanePoint<Real> sb = GroupElement::inversion().apply(b);
    for (const auto& base : {b, sb}) {
      for (int shift = -1; shift <= 1; ++shift) {
        if (hyperbolic_distance(a, HalfPlanePoint<Real>{base.x + shift, base.y}) < merge) return true;
      }
    }
    return false;
  };
  std::vector<Candidate> unique;
  for (const auto& c : reduced) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const Candidate& u) { return equivalent(u.z, c.z); });
    if (it == unique.end()) {
      unique.push_back(c);
    } else {
      it->multiplicity = std::max(it->multiplicity, c.multiplicity);
      it->residual_log = std::max(it->residual_log, c.residual_log);
      if (c.z.x < it->z.x) it->z = c.z;
    }
  }

  const HalfPlanePoint<Real> i_pt{Real(0), Real(1)};
  const Real sqrt3_2 = sqrt(Real(3)) / 2;
  const Real elliptic = Real(options.elliptic_tol);
  for (const auto& u : unique) {
    ZeroRecord rec;
    rec.point = {static_cast<double>(u.z.x), static_cast<double>(u.z.y)};
    rec.multiplicity = u.multiplicity;
    rec.residual_log = u.residual_log;
    const Real d_rho = std::min(hyperbolic_distance(u.z, HalfPlanePoint<Real>{Real(-0.5), sqrt3_2}),
                                hyperbolic_distance(u.z, HalfPlanePoint<Real>{Real(0.5), sqrt3_2}));
    if (hyperbolic_distance(u.z, i_pt) < elliptic) {
      rec.stab_weight = mpq_class(1, 2);
    } else if (d_rho < elliptic) {
      rec.stab_weight = mpq_class(1, 3);
    }
    zs.nu += rec.stab_weight * rec.multiplicity;
    zs.records.push_back(rec);
  }
  std::sort(zs.records.begin(), zs.records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.point.y != b.point.y) return a.point.y > b.point.y;
    return a.point.x < b.point.x;
  });

  mpq_class expected(f.weight, 12);
  expected.canonicalize();
  if (zs.nu + zs.ord_infinity != expected) {
    throw ValenceMismatch("zeros_in_F(" + f.id() + "): nu + ord = " + mpq_class(zs.nu + zs.ord_infinity).get_str() +
                          ", expected " + mpq_class(expected).get_str());
  }
  return zs;
}

namespace {

struct PhaseTracker {
  const FastEvaluator& fe;
  int max_depth = 40;

  long double phase_at(long double x, long double y) const {
    const auto v = fe.eval(x, y);
    if (!(v.log_abs > kLogFloor)) throw NonConvergence("argument_principle_count: zero on the contour");
    return v.phase;
  }

  template <class Path>
  long double segment(const Path& path, long double t0, long double t1, long double p0, long double p1, int depth) const {
    const long double two_pi = 6.283185307179586476925286766559L;
    const long double d = std::remainder(p1 - p0, two_pi);
    if (std::fabs(d) <= 0.4L) return d;
    if (depth >= max_depth) {
      if (std::fabs(d) < 3.0L) return d;
      throw NonConvergence("argument_principle_count: phase jump not resolved");
    }
    const long double tm = 0.5L * (t0 + t1);
    const auto [xm, ym] = path(tm);
    const long double pm = phase_at(xm, ym);
    return segment(path, t0, tm, p0, pm, depth + 1) + segment(path, tm, t1, pm, p1, depth + 1);
  }

  template <class Path>
  long double edge(const Path& path, int samples) const {
    long double total = 0;
    auto [x0, y0] = path(0.0L);
    long double prev = phase_at(x0, y0);
    for (int s = 1; s <= samples; ++s) {
      const long double t = static_cast<long double>(s) / samples;
      const auto [x, y] = path(t);
      const long double p = phase_at(x, y);
      total += segment(path, static_cast<long double>(s - 1) / samples, t, prev, p, 0);
      prev = p;
    }
    return total;
  }
};

}  // namespace

int argument_principle_count(const FormNumeric& f, const BoxRegion& box) {
  box.validate();
  const FastEvaluator fe(f);
  const PhaseTracker tracker{fe};
  using Pt = std::pair<long double, long double>;
  const long double xl = box.x_lo, xh = box.x_hi, yl = box.y_lo, yh = box.y_hi;
  const int samples = 64;
  long double total = 0;
  total += tracker.edge([&](long double t) { return Pt{xl + t * (xh - xl), yl}; }, samples);
  total += tracker.edge([&](long double t) { return Pt{xh, yl + t * (yh - yl)}; }, samples);
  total += tracker.edge([&](long double t) { return Pt{xh - t * (xh - xl), yh}; }, samples);
  total += tracker.edge([&](long double t) { return Pt{xl, yh - t * (yh - yl)}; }, samples);
  const long double winding = total / 6.283185307179586476925286766559L;
  const long double rounded = std::round(winding);
  if (std::fabs(winding - rounded) > 1e-3L) {
    throw NonConvergence("argument_principle_count: winding " + std::to_string(static_cast<double>(winding)) +
                         " is not an integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace modzero
