#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "modzero/eigen.hpp"
#include "modzero/evaluate.hpp"
#include "modzero/qseries.hpp"

using namespace modzero;

namespace {

using Cx = std::complex<long double>;

Cx direct_sum(const FormNumeric& f, long double x, long double y) {
  const Cx q = std::exp(Cx(0, 2 * std::numbers::pi_v<long double>) * Cx(x, y));
  Cx sum = 0, qn = 1;
  for (int n = 0; n <= f.trunc(); ++n) {
    sum += static_cast<long double>(f[n]) * qn;
    qn *= q;
  }
  return sum;
}

}  // namespace

TEST(Reduction, LandsInFAndRecordsTheGroupElement) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-20, 20), uy(-8, 0.5);
  for (int i = 0; i < 2000; ++i) {
    const UpperHalfPoint z{ux(rng), std::pow(10.0, uy(rng))};
    const auto r = reduce_to_fundamental(z);
    EXPECT_TRUE(in_fundamental_domain(r.point)) << z.x << " " << z.y;
    EXPECT_EQ(r.gamma.a * r.gamma.d - r.gamma.b * r.gamma.c, 1);
    const auto w = r.gamma.apply(HalfPlanePoint<long double>{z.x, z.y});
    EXPECT_NEAR(static_cast<double>(w.x), r.point.x, 1e-6 * (1 + std::fabs(r.point.x)));
    EXPECT_NEAR(static_cast<double>(w.y), r.point.y, 1e-6 * r.point.y);
  }
}

TEST(Reduction, TieConventions) {
  const auto a = reduce_to_fundamental(UpperHalfPoint{0.5, 2.0});
  EXPECT_EQ(a.point.x, -0.5);
  const auto b = reduce_to_fundamental(UpperHalfPoint{0.28, 0.96});
  EXPECT_NEAR(b.point.x, -0.28, 1e-15);
  EXPECT_NEAR(b.point.y, 0.96, 1e-15);
  EXPECT_FALSE(in_fundamental_domain(UpperHalfPoint{0.28, 0.96}));
  EXPECT_TRUE(in_fundamental_domain(UpperHalfPoint{-0.28, 0.96}));
  EXPECT_FALSE(in_fundamental_domain(UpperHalfPoint{-0.6, 0.8}));
}

TEST(GroupElement, CompositionAndInverse) {
  const GroupElement g{2, 1, 1, 1}, h{1, -3, 0, 1};
  const HalfPlanePoint<long double> z{0.17L, 0.9L};
  const auto gh = (g * h).apply(z), g_h = g.apply(h.apply(z));
  EXPECT_NEAR(static_cast<double>(gh.x), static_cast<double>(g_h.x), 1e-15);
  EXPECT_NEAR(static_cast<double>(gh.y), static_cast<double>(g_h.y), 1e-15);
  EXPECT_EQ(g * g.inverse(), GroupElement::identity());
}

TEST(HyperbolicDistance, MatchesArcosh) {
  const HalfPlanePoint<double> z{0.1, 0.7}, w{-0.4, 2.3};
  const double expected = std::acosh(1 + ((z.x - w.x) * (z.x - w.x) + (z.y - w.y) * (z.y - w.y)) / (2 * z.y * w.y));
  EXPECT_NEAR(hyperbolic_distance(z, w), expected, 1e-14);
  EXPECT_EQ(hyperbolic_distance(z, z), 0.0);
}

TEST(EvalLog, MatchesDirectSummationInF) {
  for (const auto& f : {eisenstein_form(4, 80), eigenform(24, 1, 80), eigenform(12, 0, 80)}) {
    for (auto [x, y] : {std::pair{0.0L, 1.0L}, {-0.3L, 0.97L}, {0.21L, 1.6L}, {-0.5L, 0.9L}}) {
      const Cx ref = direct_sum(f, x, y);
      const auto v = eval_log(f, UpperHalfPoint{static_cast<double>(x), static_cast<double>(y)});
      EXPECT_NEAR(static_cast<double>(v.log_abs), static_cast<double>(std::log(std::abs(ref))), 1e-14) << f.id();
      EXPECT_NEAR(std::remainder(static_cast<double>(v.phase) - static_cast<double>(std::arg(ref)), 2 * std::numbers::pi),
                  0.0, 1e-12)
          << f.id();
    }
  }
}

TEST(EvalLog, ModularTransformationLaw) {
  // f(gz) = (cz + d)^k f(z): evaluate far below F and compare with the series at z.
  const GroupElement gammas[] = {{2, 1, 1, 1}, {1, 0, 3, 1}, {5, 2, 7, 3}, {-4, 1, 13, -3}};
  for (const auto& f : {eisenstein_form(6, 80), eigenform(36, 0, 120)}) {
    const int k = f.weight;
    for (const auto& g : gammas) {
      const HalfPlanePoint<long double> z{-0.23L, 1.12L};
      const auto w = g.apply(z);
      const Cx fz = direct_sum(f, z.x, z.y);
      const Cx j = Cx(static_cast<long double>(g.c) * z.x + g.d, static_cast<long double>(g.c) * z.y);
      const long double expected = std::log(std::abs(fz)) + k * std::log(std::abs(j));
      const auto v = eval_log(f, UpperHalfPoint{static_cast<double>(w.x), static_cast<double>(w.y)});
      EXPECT_NEAR(static_cast<double>(v.log_abs), static_cast<double>(expected), 1e-9) << f.id();
    }
  }
}

TEST(EvalLog, EllipticZeros) {
  const auto e6 = eisenstein_form(6, 120);
  EXPECT_LT(static_cast<double>(eval_log(e6, UpperHalfPoint{0.0, 1.0}).log_abs), -100);
  const auto e4 = eisenstein_form(4, 120);
  const auto rho = eval_log(e4, UpperHalfPoint{-0.5, 0.86602540378443864676});
  EXPECT_LT(static_cast<double>(rho.log_abs), -30);
}

TEST(FastEvaluator, AgreesWithReference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.8, 4.0);
  for (const auto& f : {eisenstein_form(40, 200), eigenform(60, 2, 200)}) {
    FastEvaluator fe(f);
    for (int i = 0; i < 200; ++i) {
      const double x = ux(rng), y = uy(rng);
      const auto ref = eval_log(f, UpperHalfPoint{x, y});
      const auto fast = fe.eval(x, y);
      EXPECT_NEAR(static_cast<double>(fast.log_abs), static_cast<double>(ref.log_abs),
                  1e-12 * (1 + std::fabs(static_cast<double>(ref.log_abs))))
          << f.id() << " " << x << " " << y;
    }
  }
}

TEST(FastEvaluator, LogMassUsesTheNorm) {
  const auto f = eigenform(24, 0, 100);
  FastEvaluator fe(f);
  const long double a = fe.log_mass(0.1L, 1.3L);
  fe.set_log_norm(2.5);
  EXPECT_NEAR(static_cast<double>(a - fe.log_mass(0.1L, 1.3L)), 2.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(a), static_cast<double>(24 * std::log(1.3L) + 2 * fe.eval(0.1L, 1.3L).log_abs), 1e-12);
}

TEST(CoefficientBound, CoversStoredCoefficients) {
  for (const auto& f : {eisenstein_form(12, 300), eigenform(48, 1, 300), eigenform(12, 0, 300)}) {
    const auto b = coefficient_bound(f);
    for (int n = 1; n <= f.trunc(); ++n) {
      if (f[n] == 0) continue;
      EXPECT_LE(log_abs_double(f[n]), b.log_bound(n) + 1e-9) << f.id() << " n=" << n;
    }
  }
}

TEST(TailTerms, MoreTermsForLowerPointsAndTighterTolerance) {
  const auto f = eigenform(60, 0, 400);
  EXPECT_LT(tail_terms_needed(f, 2.0, -100), tail_terms_needed(f, 0.866, -100));
  EXPECT_LT(tail_terms_needed(f, 0.866, -50), tail_terms_needed(f, 0.866, -150));
}

TEST(LogAbsDouble, HandlesHugeAndZero) {
  PrecisionScope scope(128);
  EXPECT_EQ(log_abs_double(Real(0)), -std::numeric_limits<double>::infinity());
  const Real big = pow(Real(10), 5000);
  EXPECT_NEAR(log_abs_double(big), 5000 * std::log(10.0), 1e-9);
  EXPECT_NEAR(log_abs_double(-1 / big), -5000 * std::log(10.0), 1e-9);
}
