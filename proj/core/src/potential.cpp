#include "modzero/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "modzero/errors.hpp"
#include "modzero/quadrature.hpp"

namespace modzero {
namespace {

constexpr double kThreeOverPi = 0.95492965855137201461;
constexpr long double kTwoPi = 6.283185307179586476925286766559L;

// d s + c t = gcd(d, c) > 0.
std::tuple<std::int64_t, std::int64_t, std::int64_t> extended_gcd(std::int64_t d, std::int64_t c) {
  std::int64_t r0 = d, r1 = c, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_tuple(t1, t0 - q * t1);
  }
  if (r0 < 0) return {-r0, -s0, -t0};
  return {r0, s0, t0};
}

// Points of all Gamma-images of the zero set inside the closed box, with multiplicity.
std::vector<std::pair<UpperHalfPoint, int>> zero_images(const ZeroSet& zs, const BoxRegion& box) {
  std::vector<std::pair<UpperHalfPoint, int>> out;
  for (const auto& r : zs.records) {
    std::vector<UpperHalfPoint> seen;
    for (const auto& g : enumerate_translates(r.point, box)) {
      const UpperHalfPoint w = g.apply(r.point);
      const bool dup = std::any_of(seen.begin(), seen.end(), [&](const UpperHalfPoint& s) {
        return std::hypot(s.x - w.x, s.y - w.y) < 1e-9;
      });
      if (!dup) {
        seen.push_back(w);
        out.emplace_back(w, r.multiplicity);
      }
    }
  }
  return out;
}

// Integral over the disk |z - c| < r in polar coordinates, with radial and angular
// breakpoints at the given singular points.
template <class H>
long double integrate_disk(const UpperHalfPoint& c, double r, const std::vector<UpperHalfPoint>& singular, H&& h,
                           double tol) {
  std::vector<long double> radii{0.0L, static_cast<long double>(r)};
  std::vector<long double> angles{0.0L, kTwoPi};
  for (const auto& s : singular) {
    const long double rho = std::hypot(s.x - c.x, s.y - c.y);
    if (rho > 0 && rho < r) radii.push_back(rho);
    long double a = std::atan2(static_cast<long double>(s.y - c.y), static_cast<long double>(s.x - c.x));
    if (a < 0) a += kTwoPi;
    if (rho > 0 && a > 0 && a < kTwoPi) angles.push_back(a);
  }
  std::sort(radii.begin(), radii.end());
  std::sort(angles.begin(), angles.end());
  auto ring = [&](long double rho) {
    long double sum = 0;
    for (std::size_t i = 1; i < angles.size(); ++i) {
      sum += gk_integrate(
          [&](long double t) { return h(c.x + rho * std::cos(t), c.y + rho * std::sin(t)); }, angles[i - 1], angles[i],
          tol * 0.1);
    }
    return sum * rho;
  };
  long double total = 0;
  for (std::size_t i = 1; i < radii.size(); ++i) total += gk_integrate(ring, radii[i - 1], radii[i], tol);
  return total;
}

}  // namespace

void BumpFunction::validate() const {
  if (!(radius > 0) || !(radius < center.y)) {
    throw InvalidArgument("BumpFunction: need 0 < radius < Im(center)");
  }
}

BoxRegion BumpFunction::support_box() const {
  return {center.x - radius, center.x + radius, center.y - radius, center.y + radius};
}

BumpValue bump_eval(const BumpFunction& phi, const UpperHalfPoint& z) {
  const double dx = z.x - phi.center.x, dy = z.y - phi.center.y;
  const double r2 = phi.radius * phi.radius;
  const double s = (dx * dx + dy * dy) / r2;
  if (s >= 1) return {};
  const double u = 1 - s;
  const double value = std::exp(1 - 1 / u);
  const double phi_s = -value / (u * u);
  BumpValue out;
  out.value = value;
  out.grad_x = phi_s * 2 * dx / r2;
  out.grad_y = phi_s * 2 * dy / r2;
  out.laplacian_euclidean = 4 / r2 * value * (s * (1 / (u * u * u * u) - 2 / (u * u * u)) - 1 / (u * u));
  out.laplacian_hyperbolic = z.y * z.y * out.laplacian_euclidean;
  return out;
}

std::vector<GroupElement> enumerate_translates(const UpperHalfPoint& z, const BoxRegion& K) {
  K.validate();
  if (!(z.y > 0)) throw InvalidArgument("enumerate_translates: point not in the upper half-plane");
  constexpr double slack = 1e-12;
  std::vector<GroupElement> out;
  auto add_translations = [&](const GroupElement& g) {
    const UpperHalfPoint w = g.apply(z);
    if (w.y < K.y_lo - slack || w.y > K.y_hi + slack) return;
    const auto m_lo = static_cast<std::int64_t>(std::ceil(K.x_lo - w.x - slack));
    const auto m_hi = static_cast<std::int64_t>(std::floor(K.x_hi - w.x + slack));
    for (std::int64_t m = m_lo; m <= m_hi; ++m) out.push_back(GroupElement::translation(m) * g);
  };
  add_translations(GroupElement::identity());
  const double bound = z.y / K.y_lo;
  const auto c_max = static_cast<std::int64_t>(std::floor(std::sqrt(1 / (z.y * K.y_lo)) + slack));
  for (std::int64_t c = 1; c <= c_max; ++c) {
    const double r2 = bound - static_cast<double>(c * c) * z.y * z.y;
    if (r2 < -slack) continue;
    const double r = std::sqrt(std::max(r2, 0.0));
    const auto d_lo = static_cast<std::int64_t>(std::ceil(-c * z.x - r - slack));
    const auto d_hi = static_cast<std::int64_t>(std::floor(-c * z.x + r + slack));
    for (std::int64_t d = d_lo; d <= d_hi; ++d) {
      const auto [g, s, t] = extended_gcd(d, c);
      if (g != 1) continue;
      add_translations(GroupElement{s, -t, c, d});
    }
  }
  std::sort(out.begin(), out.end(), [](const GroupElement& a, const GroupElement& b) {
    return std::tie(a.c, a.d, a.a, a.b) < std::tie(b.c, b.d, b.a, b.b);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double F_phi(const BumpFunction& phi, const UpperHalfPoint& z) {
  double sum = 0;
  for (const auto& g : enumerate_translates(z, phi.support_box())) sum += bump_eval(phi, g.apply(z)).value;
  return sum;
}

double F_laplacian_phi(const BumpFunction& phi, const UpperHalfPoint& z) {
  double sum = 0;
  for (const auto& g : enumerate_translates(z, phi.support_box())) {
    sum += bump_eval(phi, g.apply(z)).laplacian_hyperbolic;
  }
  return sum;
}

int zeros_in_box(const ZeroSet& zs, const BoxRegion& box) {
  int count = 0;
  for (const auto& [w, m] : zero_images(zs, box)) {
    if (box.contains(w.x, w.y)) count += m;
  }
  return count;
}

IdentityCheck check_zero_identity(const FormNumeric& f, const ZeroSet& zs, const BumpFunction& phi, double quad_eps) {
  phi.validate();
  if (!(quad_eps > 0)) throw InvalidArgument("check_zero_identity: quad_eps must be positive");
  IdentityCheck out;
  out.weight = f.weight;
  out.kind = f.kind;
  out.eigen_index = f.eigen_index;
  out.phi = phi;
  out.quad_eps = quad_eps;

  for (const auto& r : zs.records) out.lhs += mpq_class(r.stab_weight * r.multiplicity).get_d() * F_phi(phi, r.point);

  const FastEvaluator fe(f);
  const int k = f.weight;
  auto log_invariant = [&](long double x, long double y) { return 0.5L * k * std::log(y) + fe.eval(x, y).log_abs; };

  std::vector<UpperHalfPoint> singular;
  for (const auto& [w, m] : zero_images(zs, phi.support_box())) singular.push_back(w);

  const long double area = integrate_disk(
      phi.center, phi.radius, singular,
      [&](long double x, long double y) { return bump_eval(phi, {static_cast<double>(x), static_cast<double>(y)}).value / (y * y); },
      quad_eps);
  const long double potential = integrate_disk(
      phi.center, phi.radius, singular,
      [&](long double x, long double y) {
        const double lap = bump_eval(phi, {static_cast<double>(x), static_cast<double>(y)}).laplacian_euclidean;
        return lap == 0 ? 0.0L : log_invariant(x, y) * lap;
      },
      quad_eps);
  out.unfolded_volume = static_cast<double>(kThreeOverPi * area);
  out.rhs = static_cast<double>(k / 12.0L * kThreeOverPi * area + potential / kTwoPi);
  out.diff = std::fabs(out.lhs - out.rhs);

  // Every image of supp phi meeting F lies below max(y0 + r, 1/(y0 - r)).
  const double y_top = std::max(phi.center.y + phi.radius, 1 / (phi.center.y - phi.radius));
  const BoxRegion region{-0.5, 0.5, 0.5, y_top};
  const long double folded = integrate_box_in_F(
      region,
      [&](long double x, long double y) { return F_phi(phi, {static_cast<double>(x), static_cast<double>(y)}) / (y * y); },
      quad_eps);
  const long double folded_potential = integrate_box_in_F(
      region,
      [&](long double x, long double y) {
        const double lap = F_laplacian_phi(phi, {static_cast<double>(x), static_cast<double>(y)});
        return lap == 0 ? 0.0L : log_invariant(x, y) * lap / (y * y);
      },
      quad_eps);
  out.folded_volume = static_cast<double>(kThreeOverPi * folded);
  out.rhs_invariant = static_cast<double>(k / 12.0L * kThreeOverPi * folded + folded_potential / kTwoPi);
  out.diff_invariant = std::fabs(out.lhs - out.rhs_invariant);
  return out;
}

double point_charge_integral(const BumpFunction& phi, const UpperHalfPoint& z1, double quad_eps) {
  phi.validate();
  const long double v = integrate_disk(
      phi.center, phi.radius, {z1},
      [&](long double x, long double y) {
        const double lap = bump_eval(phi, {static_cast<double>(x), static_cast<double>(y)}).laplacian_euclidean;
        return lap == 0 ? 0.0L : std::log(std::hypot(x - z1.x, y - z1.y)) * lap;
      },
      quad_eps);
  return static_cast<double>(v / kTwoPi);
}

}  // namespace modzero
