#include <cmath>

#include <gtest/gtest.h>

#include "modzero/eigen.hpp"
#include "modzero/errors.hpp"
#include "modzero/potential.hpp"
#include "modzero/qseries.hpp"
#include "modzero/zerofind.hpp"

using namespace modzero;

namespace {

FormNumeric eis(int k) { return eisenstein_form(k, default_form_truncation(k, FormKind::Eisenstein)); }

std::vector<FormNumeric> eig(int k) { return eigenforms(k, default_form_truncation(k, FormKind::Eigenform)); }

double dist(const UpperHalfPoint& a, const UpperHalfPoint& b) { return hyperbolic_distance(a, b); }

}  // namespace

TEST(ZerosInF, ValenceFormulaForAllFormsUpToSixty) {
  for (int k = 12; k <= 60; k += 2) {
    std::vector<FormNumeric> forms{eis(k)};
    for (auto& f : eig(k)) forms.push_back(std::move(f));
    for (const auto& f : forms) {
      const auto zs = zeros_in_F(f);
      mpq_class expected(k, 12);
      expected.canonicalize();
      EXPECT_EQ(zs.nu + zs.ord_infinity, expected) << f.id();
      mpq_class nu = 0;
      for (const auto& r : zs.records) {
        const auto& z = r.point;
        EXPECT_TRUE(z.x >= -0.5 && z.x < 0.5 && z.x * z.x + z.y * z.y >= 1 - 1e-12) << f.id();
        nu += r.stab_weight * r.multiplicity;
      }
      EXPECT_EQ(nu, zs.nu) << f.id();
    }
  }
}

TEST(ZerosInF, EllipticZerosOfSmallEisensteinSeries) {
  const auto e4 = zeros_in_F(eis(4));
  ASSERT_EQ(e4.records.size(), 1u);
  EXPECT_LT(dist(e4.records[0].point, point_rho()), 1e-10);
  EXPECT_EQ(e4.records[0].stab_weight, mpq_class(1, 3));
  EXPECT_EQ(e4.records[0].multiplicity, 1);

  const auto e6 = zeros_in_F(eis(6));
  ASSERT_EQ(e6.records.size(), 1u);
  EXPECT_LT(dist(e6.records[0].point, point_i()), 1e-10);
  EXPECT_EQ(e6.records[0].stab_weight, mpq_class(1, 2));

  // E14 = E4^2 E6: a double zero at rho and a simple zero at i.
  const auto e14 = zeros_in_F(eis(14));
  ASSERT_EQ(e14.records.size(), 2u);
  int at_rho = 0, at_i = 0;
  for (const auto& r : e14.records) {
    if (dist(r.point, point_rho()) < 1e-6) at_rho = r.multiplicity;
    if (dist(r.point, point_i()) < 1e-6) at_i = r.multiplicity;
  }
  EXPECT_EQ(at_rho, 2);
  EXPECT_EQ(at_i, 1);
}

TEST(ZerosInF, EisensteinZerosLieOnTheArc) {
  for (int k = 12; k <= 120; k += 6) {
    const auto zs = zeros_in_F(eis(k));
    for (const auto& r : zs.records) EXPECT_LT(std::fabs(std::hypot(r.point.x, r.point.y) - 1), 1e-8) << k;
  }
}

TEST(ZerosInF, DeltaHasOnlyTheCusp) {
  const auto zs = zeros_in_F(eigenform(12, 0, 80));
  EXPECT_TRUE(zs.records.empty());
  EXPECT_EQ(zs.ord_infinity, 1);
  EXPECT_EQ(zs.nu, 0);
}

TEST(ZerosInF, ProductFormsCombineZeroSets) {
  // Delta * E4 and Delta^2 * E6 as custom forms.
  const int N = 200;
  const auto d = delta_qexp(N);
  const auto f = custom_form(series_mul(d, eisenstein_qexp(4, N)));
  const auto zs = zeros_in_F(f);
  EXPECT_EQ(zs.ord_infinity, 1);
  ASSERT_EQ(zs.records.size(), 1u);
  EXPECT_LT(dist(zs.records[0].point, point_rho()), 1e-8);

  const auto g = custom_form(series_mul(series_mul(d, d), eisenstein_qexp(6, N)));
  const auto zg = zeros_in_F(g);
  EXPECT_EQ(zg.ord_infinity, 2);
  ASSERT_EQ(zg.records.size(), 1u);
  EXPECT_LT(dist(zg.records[0].point, point_i()), 1e-8);
}

TEST(ZerosInF, EachZeroIsEnclosedWithItsMultiplicity) {
  for (const auto& f : eig(48)) {
    const auto zs = zeros_in_F(f);
    for (const auto& r : zs.records) {
      EXPECT_LT(r.residual_log, -100) << f.id();
      const double h = 1e-3;
      const BoxRegion box{r.point.x - h, r.point.x + h, r.point.y - h, r.point.y + h};
      EXPECT_EQ(argument_principle_count(f, box), r.multiplicity) << f.id() << " " << r.point.x << " " << r.point.y;
    }
  }
}

TEST(ZerosInF, SortedAndDeterministic) {
  const auto f = eig(72)[3];
  const auto a = zeros_in_F(f), b = zeros_in_F(f);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].point.x, b.records[i].point.x);
    EXPECT_EQ(a.records[i].point.y, b.records[i].point.y);
    if (i > 0) {
      const auto& p = a.records[i - 1].point;
      const auto& q = a.records[i].point;
      EXPECT_TRUE(p.y > q.y || (p.y == q.y && p.x <= q.x));
    }
  }
}

TEST(RootsInQdisk, PolynomialWithKnownRoots) {
  // (1 - q/a)(1 - q/b) with both roots inside the disk of radius e^(-pi sqrt 3).
  PrecisionScope scope(192);
  const Real a = Real(2) / 1000, b = Real(-3) / 1000;
  std::vector<Real> c(60, Real(0));
  c[0] = 1;
  c[1] = -(1 / a + 1 / b);
  c[2] = 1 / (a * b);
  const auto f = custom_form(0, c);
  const auto roots = roots_in_qdisk(f, default_qdisk_radius(), 192);
  ASSERT_EQ(roots.size(), 2u);
  std::vector<double> re;
  for (const auto& r : roots) {
    EXPECT_LT(static_cast<double>(abs(r.q.imag())), 1e-40);
    re.push_back(static_cast<double>(r.q.real()));
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -0.003, 1e-40);
  EXPECT_NEAR(re[1], 0.002, 1e-40);
}

TEST(ArgumentPrinciple, AgreesWithZeroCountsOnBoxes) {
  const BoxRegion boxes[] = {{-0.51, 0.0, 0.8, 1.2}, {-0.2, 0.2, 0.9, 3.0}, {-0.51, 0.49, 1.2, 2.5}, {0.05, 0.45, 0.75, 1.5}};
  int checked = 0, total = 0;
  for (int k : {24, 36, 40}) {
    std::vector<FormNumeric> forms{eis(k)};
    for (auto& f : eig(k)) forms.push_back(std::move(f));
    for (const auto& f : forms) {
      const auto zs = zeros_in_F(f);
      for (const auto& box : boxes) {
        ++total;
        try {
          EXPECT_EQ(argument_principle_count(f, box), zeros_in_box(zs, box)) << f.id();
          ++checked;
        } catch (const NonConvergence&) {
          // A zero on the contour; the count is undefined there.
        }
      }
    }
  }
  EXPECT_GE(checked, total - 3);
}

TEST(ArgumentPrinciple, EmptyBoxAndContourZero) {
  const auto f = eis(12);
  EXPECT_EQ(argument_principle_count(f, BoxRegion{-0.4, 0.4, 2.0, 3.0}), 0);
  const auto e6 = eis(6);
  EXPECT_THROW(argument_principle_count(e6, BoxRegion{-0.3, 0.0, 0.9, 1.2}), NonConvergence);
}
