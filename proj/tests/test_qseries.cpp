#include <gtest/gtest.h>

#include "modzero/errors.hpp"
#include "modzero/qseries.hpp"

using namespace modzero;

namespace {

// Akiyama-Tanigawa; yields B_1 = +1/2, so callers flip the sign of B_1.
std::vector<mpq_class> akiyama_tanigawa(int n_max) {
  std::vector<mpq_class> out, a(static_cast<std::size_t>(n_max) + 1);
  for (int m = 0; m <= n_max; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out.push_back(a[0]);
  }
  return out;
}

// q prod (1 - q^n)^24 with integer arithmetic.
std::vector<mpz_class> delta_by_product(int N) {
  std::vector<mpz_class> p(static_cast<std::size_t>(N) + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= N; ++n) {
    for (int rep = 0; rep < 24; ++rep) {
      for (int m = N; m >= n; --m) p[m] -= p[m - n];
    }
  }
  std::vector<mpz_class> d(static_cast<std::size_t>(N) + 1, 0);
  for (int m = 1; m <= N; ++m) d[m] = p[m - 1];
  return d;
}

mpz_class sigma_brute(long n, unsigned r) {
  mpz_class s = 0;
  for (long d = 1; d <= n; ++d) {
    if (n % d == 0) {
      mpz_class t;
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), r);
      s += t;
    }
  }
  return s;
}

}  // namespace

TEST(Bernoulli, MatchesAkiyamaTanigawa) {
  const auto ref = akiyama_tanigawa(60);
  for (int n = 0; n <= 60; n += 2) EXPECT_EQ(bernoulli(n), ref[n]) << n;
  for (int n = 3; n <= 60; n += 2) EXPECT_EQ(ref[n], 0) << n;
}

TEST(Bernoulli, RejectsOddAndOutOfRange) {
  EXPECT_THROW(bernoulli(-2), InvalidArgument);
  EXPECT_THROW(bernoulli(7), InvalidArgument);
  EXPECT_THROW(bernoulli(20, 10), InvalidArgument);
}

TEST(SigmaPower, MatchesDivisorLoop) {
  for (long n = 1; n <= 120; ++n) {
    for (unsigned r : {0u, 1u, 3u, 11u}) EXPECT_EQ(sigma_power(n, r), sigma_brute(n, r)) << n << " " << r;
  }
}

TEST(DeltaQexp, MatchesProductFormula) {
  const int N = 80;
  const auto ref = delta_by_product(N);
  const auto d = delta_qexp(N);
  ASSERT_EQ(d.trunc(), N);
  EXPECT_EQ(d.weight, 12);
  for (int n = 0; n <= N; ++n) EXPECT_EQ(d[n], ref[n]) << n;
}

TEST(EisensteinQexp, RelationsInOneDimensionalSpaces) {
  const int N = 40;
  const auto e4 = eisenstein_qexp(4, N), e6 = eisenstein_qexp(6, N);
  EXPECT_EQ(series_mul(e4, e4), eisenstein_qexp(8, N));
  EXPECT_EQ(series_mul(e4, e6), eisenstein_qexp(10, N));
  EXPECT_EQ(series_mul(eisenstein_qexp(8, N), e6), eisenstein_qexp(14, N));
  const auto lhs = series_add(series_pow(e4, 3, N), series_scale(series_pow(e6, 2, N), -1));
  EXPECT_EQ(lhs, series_scale(delta_qexp(N), 1728));
}

TEST(EisensteinQexp, ConstantTermAndIntegrality) {
  for (int k = 4; k <= 30; k += 2) {
    const auto e = eisenstein_qexp(k, 10);
    EXPECT_EQ(e[0], 1);
    const mpq_class c = mpq_class(-2 * k) / bernoulli(k);
    for (int n = 1; n <= 10; ++n) EXPECT_EQ(e[n], c * sigma_brute(n, static_cast<unsigned>(k - 1))) << k << " " << n;
  }
  EXPECT_TRUE(eisenstein_qexp(4, 10).is_integral());
  EXPECT_FALSE(eisenstein_qexp(12, 10).is_integral());
  EXPECT_THROW(eisenstein_qexp(3, 10), InvalidArgument);
  EXPECT_THROW(eisenstein_qexp(2, 10), InvalidArgument);
}

TEST(DimCusp, MatchesDimensionFormula) {
  // dim M_k = floor(k/12) + (k mod 12 != 2), dim S_k = dim M_k - 1 for k >= 4.
  for (int k = 4; k <= 400; k += 2) {
    const int dim_m = k / 12 + (k % 12 != 2 ? 1 : 0);
    EXPECT_EQ(dim_cusp(k), dim_m - 1) << k;
  }
}

TEST(MillerBasis, EchelonFormAndIntegral) {
  for (int k : {12, 24, 36, 50, 60}) {
    const int d = dim_cusp(k);
    const int N = default_basis_truncation(k, 2);
    const auto basis = miller_basis(k, N);
    ASSERT_EQ(static_cast<int>(basis.size()), d);
    for (int i = 1; i <= d; ++i) {
      const auto& f = basis[i - 1];
      EXPECT_EQ(f.weight, k);
      EXPECT_TRUE(f.is_integral());
      for (int n = 0; n <= d; ++n) EXPECT_EQ(f[n], n == i ? 1 : 0) << k << " " << i << " " << n;
    }
  }
}

TEST(MillerBasis, WeightTwelveIsDelta) {
  const auto basis = miller_basis(12, 50);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], delta_qexp(50));
}

TEST(HeckeMatrix, WeightTwelveIsTau) {
  const auto basis = miller_basis(12, 40);
  const auto ref = delta_by_product(10);
  for (int p : {2, 3, 5, 7}) {
    const auto t = hecke_matrix(p, 12, basis);
    ASSERT_EQ(t.dim, 1);
    EXPECT_EQ(t(0, 0), ref[p]) << p;
  }
}

TEST(HeckeApply, MultiplicativeOnCoprimeIndices) {
  const int k = 24, N = 240;
  for (const auto& f : miller_basis(k, N)) {
    const auto t6 = hecke_apply(6, f);
    const auto t23 = hecke_apply(2, hecke_apply(3, f));
    const auto t32 = hecke_apply(3, hecke_apply(2, f));
    const int n = std::min({t6.trunc(), t23.trunc(), t32.trunc()});
    ASSERT_GT(n, 10);
    for (int m = 0; m <= n; ++m) {
      EXPECT_EQ(t6[m], t23[m]) << m;
      EXPECT_EQ(t6[m], t32[m]) << m;
    }
  }
}

TEST(HeckeApply, PrimeSquareRelation) {
  // T_p T_p = T_{p^2} + p^(k-1).
  const int k = 24, p = 2, N = 200;
  for (const auto& f : miller_basis(k, N)) {
    const auto tpp = hecke_apply(p, hecke_apply(p, f));
    const auto tp2 = hecke_apply(p * p, f);
    const mpq_class pk = mpz_class(1) << (k - 1);
    const int n = std::min(tpp.trunc(), tp2.trunc());
    for (int m = 0; m <= n; ++m) EXPECT_EQ(tpp[m], tp2[m] + pk * f[m]) << m;
  }
}

TEST(HeckeApply, EisensteinEigenvalueIsSigma) {
  const int k = 16;
  const auto e = eisenstein_qexp(k, 200);
  for (int p : {2, 3, 5}) {
    const auto t = hecke_apply(p, e);
    const mpz_class lambda = sigma_brute(p, k - 1);
    for (int m = 0; m <= t.trunc(); ++m) EXPECT_EQ(t[m], lambda * e[m]) << p << " " << m;
  }
}

TEST(SeriesOps, TruncationAndWeightChecks) {
  const auto a = eisenstein_qexp(4, 10), b = eisenstein_qexp(6, 5);
  EXPECT_EQ(series_mul(a, b).trunc(), 5);
  EXPECT_EQ(series_mul(a, b).weight, 10);
  EXPECT_THROW(series_add(a, b), InvalidArgument);
}

TEST(SeriesJson, RoundTrip) {
  const auto s = series_scale(eisenstein_qexp(12, 20), mpq_class(3, 7));
  EXPECT_EQ(series_from_json(to_json(s)), s);
  EXPECT_THROW(series_from_json("{\"weight\":12}"), InvalidArgument);
  EXPECT_THROW(series_from_json("not json"), InvalidArgument);
}
