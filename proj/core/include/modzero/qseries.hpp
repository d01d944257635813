#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace modzero {

/// Truncated q-expansion c_0 + c_1 q + ... + c_N q^N with exact rational coefficients.
struct ExactSeries {
  int weight = 0;
  std::vector<mpq_class> coeffs;

  ExactSeries() = default;
  ExactSeries(int weight, std::vector<mpq_class> coeffs);

  int trunc() const { return static_cast<int>(coeffs.size()) - 1; }
  const mpq_class& operator[](int n) const { return coeffs[static_cast<std::size_t>(n)]; }
  bool is_integral() const;
  bool operator==(const ExactSeries&) const = default;
};

/// Matrix of T_n acting on the Miller basis of S_k; column j holds T_n f_j.
struct HeckeMatrix {
  int n = 0;
  int weight = 0;
  int dim = 0;
  std::vector<mpz_class> entries;  // row-major, dim x dim

  const mpz_class& operator()(int row, int col) const {
    return entries[static_cast<std::size_t>(row * dim + col)];
  }
  mpz_class& operator()(int row, int col) { return entries[static_cast<std::size_t>(row * dim + col)]; }
  bool operator==(const HeckeMatrix&) const = default;
};

inline constexpr int kDefaultBernoulliMax = 1000;

/// Exact Bernoulli number B_n (B_1 = -1/2), memoized.
mpq_class bernoulli(int n, int max_n = kDefaultBernoulliMax);

/// Sum of d^r over the divisors d of n.
mpz_class sigma_power(long n, unsigned r);

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
ExactSeries eisenstein_qexp(int k, int N);

/// Discriminant (E4^3 - E6^2)/1728 = q - 24 q^2 + ...
ExactSeries delta_qexp(int N);

/// Cauchy product, truncated to the shorter input; weights add.
ExactSeries series_mul(const ExactSeries& a, const ExactSeries& b);
/// Sum, truncated to the shorter input; weights must match.
ExactSeries series_add(const ExactSeries& a, const ExactSeries& b);
ExactSeries series_scale(const ExactSeries& a, const mpq_class& c);
ExactSeries series_pow(const ExactSeries& a, int e, int N);

/// Dimension of the space of level-one cusp forms of weight k.
int dim_cusp(int k);

/// Working truncation max(16 d, n_max d + d).
int default_basis_truncation(int k, int n_max);

/// Echelonized integral basis f_i = q^i + O(q^{d+1}), i = 1..d, of S_k.
std::vector<ExactSeries> miller_basis(int k, int N);

/// T_n on the Miller basis via b(m) = sum_{e | (m,n)} e^{k-1} a(mn/e^2).
HeckeMatrix hecke_matrix(int n, int k, std::span<const ExactSeries> basis);

/// Coefficients of T_n f for a single series, up to floor(trunc / n).
ExactSeries hecke_apply(int n, const ExactSeries& f);

std::string to_json(const ExactSeries& s);
ExactSeries series_from_json(std::string_view text);

}  // namespace modzero
