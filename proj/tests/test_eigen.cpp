#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "modzero/eigen.hpp"
#include "modzero/errors.hpp"
#include "modzero/qseries.hpp"
#include "modzero/zerofind.hpp"

using namespace modzero;

namespace {

using Cx = std::complex<long double>;

Cx eval_series(const ExactSeries& f, Cx z) {
  const Cx q = std::exp(Cx(0, 2 * std::numbers::pi_v<long double>) * z);
  PrecisionScope scope(128);
  Cx sum = 0, qn = 1;
  for (int n = 0; n <= f.trunc(); ++n) {
    sum += static_cast<long double>(to_real(f[n])) * qn;
    qn *= q;
  }
  return sum;
}

// (T_p f)(z) = p^(k-1) f(pz) + (1/p) sum_{b mod p} f((z+b)/p).
Cx hecke_by_definition(const ExactSeries& f, int p, Cx z) {
  Cx sum = std::pow(static_cast<long double>(p), f.weight - 1) * eval_series(f, static_cast<long double>(p) * z);
  for (int b = 0; b < p; ++b) sum += eval_series(f, (z + static_cast<long double>(b)) / static_cast<long double>(p)) / static_cast<long double>(p);
  return sum;
}

double rel(const Real& a, const Real& b) {
  return static_cast<double>(abs(a - b) / (abs(b) + 1));
}

}  // namespace

TEST(HeckeDefinition, CoefficientActionMatchesPointwiseOperator) {
  const int k = 24;
  for (const auto& f : miller_basis(k, 600)) {
    for (int p : {2, 3, 5}) {
      const auto tf = hecke_apply(p, f);
      for (Cx z : {Cx(0.1L, 1.3L), Cx(-0.37L, 1.05L), Cx(0.45L, 2.0L)}) {
        const Cx lhs = eval_series(tf, z);
        const Cx rhs = hecke_by_definition(f, p, z);
        EXPECT_LT(std::abs(lhs - rhs), 1e-9L * (std::abs(rhs) + std::abs(lhs))) << "p=" << p << " z=" << z;
      }
    }
  }
}

TEST(EigenDecompose, SymmetricMatrixWithKnownSpectrum) {
  HeckeMatrix t;
  t.n = 2;
  t.weight = 0;
  t.dim = 3;
  // Tridiagonal (2, -1): eigenvalues 2 - 2 cos(j pi / 4).
  t.entries = {2, -1, 0, -1, 2, -1, 0, -1, 2};
  const auto pairs = eigen_decompose(t, 128);
  ASSERT_EQ(pairs.size(), 3u);
  PrecisionScope scope(160);
  const Real pi = real_pi();
  for (int j = 1; j <= 3; ++j) {
    const Real expected = 2 - 2 * cos(Real(j) * pi / 4);
    EXPECT_LT(static_cast<double>(abs(pairs[j - 1].eigenvalue - expected)), 1e-35) << j;
    EXPECT_LT(static_cast<double>(pairs[j - 1].residual), 1e-30);
    EXPECT_EQ(pairs[j - 1].eigenvector[0], 1);
  }
}

TEST(EigenDecompose, RepeatedEigenvalueIsRejected) {
  HeckeMatrix t;
  t.n = 2;
  t.dim = 2;
  // Eigenvalues 1, 1, 4.
  t.dim = 3;
  t.entries = {2, 1, 1, 1, 2, 1, 1, 1, 2};
  EXPECT_THROW(eigen_decompose(t, 128), NearDegenerateSpectrum);
}

TEST(Eigenforms, DeltaIsTheProductExpansion) {
  const int N = 60;
  const auto f = eigenform(12, 0, N);
  const auto d = delta_qexp(N);
  ASSERT_EQ(f.trunc(), N);
  for (int n = 0; n <= N; ++n) EXPECT_EQ(f[n], to_real(d[n])) << n;
}

TEST(Eigenforms, EisensteinFormMatchesExactSeries) {
  const int N = 30;
  for (int k : {4, 12, 30}) {
    const auto f = eisenstein_form(k, N);
    const auto e = eisenstein_qexp(k, N);
    PrecisionScope scope(f.precision_bits);
    for (int n = 0; n <= N; ++n) EXPECT_LT(rel(f[n], to_real(e[n])), 1e-50) << k << " " << n;
  }
}

TEST(Eigenforms, TraceOfT2IsSumOfEigenvalues) {
  for (int k : {24, 36, 48, 60, 96}) {
    const int d = dim_cusp(k);
    const auto t = hecke_matrix(2, k, miller_basis(k, default_basis_truncation(k, 2)));
    mpz_class trace = 0;
    for (int i = 0; i < d; ++i) trace += t(i, i);
    const auto forms = eigenforms(k, 2 * d + 4);
    ASSERT_EQ(static_cast<int>(forms.size()), d);
    PrecisionScope scope(forms[0].precision_bits);
    Real sum = 0;
    for (const auto& f : forms) sum += f[2];
    EXPECT_LT(rel(sum, to_real(trace)), 1e-45) << k;
  }
}

TEST(Eigenforms, NormalizedAndSortedByT2) {
  const auto forms = eigenforms(48, 40);
  ASSERT_EQ(forms.size(), 4u);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    EXPECT_EQ(forms[i].kind, FormKind::Eigenform);
    EXPECT_EQ(forms[i].eigen_index, static_cast<int>(i));
    EXPECT_EQ(forms[i][0], 0);
    EXPECT_EQ(forms[i][1], 1);
    if (i > 0) EXPECT_LT(forms[i - 1][2], forms[i][2]);
  }
}

TEST(Eigenforms, HeckeRelationsHold) {
  for (int k : {24, 40, 60}) {
    for (const auto& f : eigenforms(k, 100)) {
      PrecisionScope scope(f.precision_bits);
      const std::pair<int, int> coprime[] = {{2, 3}, {3, 5}, {4, 5}, {7, 9}, {5, 12}};
      EXPECT_LT(static_cast<double>(check_multiplicativity(f, coprime)), 1e-45) << f.id();
      for (int p : {2, 3, 5}) {
        const Real pk = pow(Real(p), k - 1);
        EXPECT_LT(rel(f[p] * f[p], f[p * p] + pk), 1e-45) << f.id() << " p=" << p;
      }
    }
  }
}

TEST(Eigenforms, DeligneBound) {
  for (int k = 12; k <= 72; k += 2) {
    if (dim_cusp(k) == 0) continue;
    for (const auto& f : eigenforms(k, 40)) {
      for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        const double bound = 2 * std::pow(static_cast<double>(p), (k - 1) / 2.0);
        EXPECT_LE(std::fabs(static_cast<double>(f[p])), bound * (1 + 1e-12)) << f.id() << " p=" << p;
      }
    }
  }
}

TEST(Eigenforms, RejectsBadArguments) {
  EXPECT_THROW(eigenforms(13, 20), InvalidArgument);
  EXPECT_THROW(eigenform(24, 2, 20), InvalidArgument);
  EXPECT_THROW(eisenstein_form(2, 20), InvalidArgument);
}

TEST(FormJson, RoundTripKeepsEveryBit) {
  auto f = eigenform(36, 1, 30);
  f.petersson_norm = 1.25L;
  const auto g = form_from_json(to_json(f));
  EXPECT_EQ(g.weight, f.weight);
  EXPECT_EQ(g.kind, f.kind);
  EXPECT_EQ(g.eigen_index, f.eigen_index);
  EXPECT_EQ(g.precision_bits, f.precision_bits);
  EXPECT_EQ(g.ord_infinity, f.ord_infinity);
  ASSERT_EQ(g.trunc(), f.trunc());
  for (int n = 0; n <= f.trunc(); ++n) EXPECT_EQ(g[n], f[n]) << n;
  EXPECT_THROW(form_from_json("{}"), InvalidArgument);
}

TEST(FormKindText, RoundTrip) {
  for (auto kind : {FormKind::Eisenstein, FormKind::Eigenform, FormKind::Custom}) {
    EXPECT_EQ(form_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(form_kind_from_string("cuspidal"), InvalidArgument);
}

TEST(OrdInfinity, CuspOrders) {
  EXPECT_EQ(ord_infinity(eigenform(12, 0, 40)), 1);
  EXPECT_EQ(ord_infinity(eisenstein_form(200, 400)), 0);
  const auto d = delta_qexp(60);
  EXPECT_EQ(ord_infinity(custom_form(series_mul(d, d))), 2);
  EXPECT_EQ(ord_infinity(custom_form(series_mul(series_mul(d, d), d))), 3);
}

TEST(DefaultTruncation, GrowsWithWeightAndPrecision) {
  EXPECT_LT(default_form_truncation(24, FormKind::Eigenform), default_form_truncation(200, FormKind::Eigenform));
  EXPECT_LT(default_form_truncation(60, FormKind::Eigenform, 128),
            default_form_truncation(60, FormKind::Eigenform, 256));
}
