#include "modzero/qseries.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include <json.hpp>

#include "modzero/errors.hpp"

namespace modzero {
namespace {

using IntSeries = std::vector<mpz_class>;

IntSeries int_mul(const IntSeries& a, const IntSeries& b, std::size_t len) {
  len = std::min({len, a.size(), b.size()});
  IntSeries out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < len; ++j) {
      if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

IntSeries int_pow(const IntSeries& a, int e, std::size_t len) {
  IntSeries result(len);
  result[0] = 1;
  IntSeries base(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min(len, a.size())));
  while (e > 0) {
    if (e & 1) result = int_mul(result, base, len);
    e >>= 1;
    if (e > 0) base = int_mul(base, base, len);
  }
  return result;
}

IntSeries numerators(const ExactSeries& s) {
  IntSeries out;
  out.reserve(s.coeffs.size());
  for (const auto& c : s.coeffs) out.push_back(c.get_num());
  return out;
}

ExactSeries from_integers(int weight, const IntSeries& v) {
  std::vector<mpq_class> coeffs(v.begin(), v.end());
  return ExactSeries(weight, std::move(coeffs));
}

void require_even_weight(int k, int min_k, const char* what) {
  if (k % 2 != 0 || k < min_k) {
    throw InvalidArgument(std::string(what) + ": weight must be even and >= " + std::to_string(min_k) +
                          ", got " + std::to_string(k));
  }
}

}  // namespace

ExactSeries::ExactSeries(int w, std::vector<mpq_class> c) : weight(w), coeffs(std::move(c)) {
  if (weight % 2 != 0 || weight < 0) throw InvalidArgument("series weight must be even and >= 0");
  if (coeffs.empty()) throw InvalidArgument("series needs at least the constant coefficient");
}

bool ExactSeries::is_integral() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const mpq_class& c) { return c.get_den() == 1; });
}

mpq_class bernoulli(int n, int max_n) {
  if (n < 0 || n > max_n || (n % 2 != 0)) {
    throw InvalidArgument("bernoulli: n must be even in [0, " + std::to_string(max_n) + "], got " +
                          std::to_string(n));
  }
  static std::mutex mutex;
  static std::vector<mpq_class> cache{mpq_class(1), mpq_class(-1, 2)};
  std::lock_guard lock(mutex);
  // sum_{j<=m} C(m+1, j) B_j = 0
  for (int m = static_cast<int>(cache.size()); m <= n; ++m) {
    if (m % 2 == 1) {
      cache.emplace_back(0);
      continue;
    }
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      if (cache[static_cast<std::size_t>(j)] != 0) acc += binom * cache[static_cast<std::size_t>(j)];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    mpq_class b = -acc / (m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[static_cast<std::size_t>(n)];
}

mpz_class sigma_power(long n, unsigned r) {
  if (n < 1) throw InvalidArgument("sigma_power: n must be >= 1");
  mpz_class total = 0;
  mpz_class term;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), r);
    total += term;
    const long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(e), r);
      total += term;
    }
  }
  return total;
}

ExactSeries eisenstein_qexp(int k, int N) {
  require_even_weight(k, 4, "eisenstein_qexp");
  if (N < 0) throw InvalidArgument("eisenstein_qexp: truncation must be >= 0");
  const mpq_class factor = mpq_class(-2 * k) / bernoulli(k, std::max(k, kDefaultBernoulliMax));
  std::vector<mpq_class> coeffs(static_cast<std::size_t>(N) + 1);
  coeffs[0] = 1;
  for (int n = 1; n <= N; ++n) {
    coeffs[static_cast<std::size_t>(n)] = factor * sigma_power(n, static_cast<unsigned>(k - 1));
  }
  return ExactSeries(k, std::move(coeffs));
}

ExactSeries delta_qexp(int N) {
  if (N < 1) throw InvalidArgument("delta_qexp: truncation must be >= 1");
  const auto len = static_cast<std::size_t>(N) + 1;
  const IntSeries e4 = numerators(eisenstein_qexp(4, N));
  const IntSeries e6 = numerators(eisenstein_qexp(6, N));
  const IntSeries e4cubed = int_pow(e4, 3, len);
  const IntSeries e6sq = int_mul(e6, e6, len);
  IntSeries delta(len);
  for (std::size_t n = 0; n < len; ++n) {
    delta[n] = e4cubed[n] - e6sq[n];
    mpz_divexact_ui(delta[n].get_mpz_t(), delta[n].get_mpz_t(), 1728);
  }
  return from_integers(12, delta);
}

ExactSeries series_mul(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
  if (a.is_integral() && b.is_integral()) {
    return from_integers(a.weight + b.weight, int_mul(numerators(a), numerators(b), len));
  }
  std::vector<mpq_class> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; i + j < len; ++j) out[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  for (auto& c : out) c.canonicalize();
  return ExactSeries(a.weight + b.weight, std::move(out));
}

ExactSeries series_add(const ExactSeries& a, const ExactSeries& b) {
  if (a.weight != b.weight) {
    throw InvalidArgument("series_add: weight mismatch (" + std::to_string(a.weight) + " vs " +
                          std::to_string(b.weight) + ")");
  }
  const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
  std::vector<mpq_class> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = a.coeffs[i] + b.coeffs[i];
  return ExactSeries(a.weight, std::move(out));
}

ExactSeries series_scale(const ExactSeries& a, const mpq_class& c) {
  std::vector<mpq_class> out(a.coeffs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs[i] * c;
  return ExactSeries(a.weight, std::move(out));
}

ExactSeries series_pow(const ExactSeries& a, int e, int N) {
  if (e < 0) throw InvalidArgument("series_pow: negative exponent");
  const auto len = std::min(static_cast<std::size_t>(N) + 1, a.coeffs.size());
  if (a.is_integral()) return from_integers(a.weight * e, int_pow(numerators(a), e, len));
  std::vector<mpq_class> one(len);
  one[0] = 1;
  ExactSeries result(0, std::move(one));
  for (int i = 0; i < e; ++i) result = series_mul(result, a);
  return result;
}

int dim_cusp(int k) {
  require_even_weight(k, 4, "dim_cusp");
  return (k % 12 == 2) ? k / 12 - 1 : k / 12;
}

int default_basis_truncation(int k, int n_max) {
  const int d = dim_cusp(k);
  return std::max(16 * d, n_max * d + d);
}

std::vector<ExactSeries> miller_basis(int k, int N) {
  require_even_weight(k, 4, "miller_basis");
  const int d = dim_cusp(k);
  if (d == 0) return {};
  if (N < d) {
    throw InsufficientTruncation("miller_basis: truncation " + std::to_string(N) + " below dimension " +
                                 std::to_string(d));
  }
  const auto len = static_cast<std::size_t>(N) + 1;
  const IntSeries delta = numerators(delta_qexp(N));
  const IntSeries e4 = numerators(eisenstein_qexp(4, N));
  const IntSeries e6 = numerators(eisenstein_qexp(6, N));

  // g_i = Delta^i E4^a E6^b with 4a + 6b = k - 12 i, b in {0, 1}.
  int max_a = 0;
  for (int i = 1; i <= d; ++i) {
    const int rest = k - 12 * i;
    max_a = std::max(max_a, (rest % 4 == 0 ? rest : rest - 6) / 4);
  }
  std::vector<IntSeries> e4_pow{IntSeries(len)};
  e4_pow[0][0] = 1;
  for (int a = 1; a <= max_a; ++a) e4_pow.push_back(int_mul(e4_pow.back(), e4, len));

  std::vector<IntSeries> rows(static_cast<std::size_t>(d));
  IntSeries delta_pow = delta;
  for (int i = 1; i <= d; ++i) {
    const int rest = k - 12 * i;
    const bool use_e6 = rest % 4 != 0;
    const int a = (use_e6 ? rest - 6 : rest) / 4;
    IntSeries g = int_mul(delta_pow, e4_pow[static_cast<std::size_t>(a)], len);
    if (use_e6) g = int_mul(g, e6, len);
    rows[static_cast<std::size_t>(i - 1)] = std::move(g);
    if (i < d) delta_pow = int_mul(delta_pow, delta, len);
  }

  // Back substitution: g_i is already q^i + O(q^{i+1}); clear columns i+1..d.
  for (int i = d - 1; i >= 1; --i) {
    auto& row = rows[static_cast<std::size_t>(i - 1)];
    for (int j = i + 1; j <= d; ++j) {
      const mpz_class c = row[static_cast<std::size_t>(j)];
      if (c == 0) continue;
      const auto& other = rows[static_cast<std::size_t>(j - 1)];
      for (std::size_t n = 0; n < len; ++n) {
        if (other[n] != 0) row[n] -= c * other[n];
      }
    }
  }

  std::vector<ExactSeries> basis;
  basis.reserve(rows.size());
  for (const auto& row : rows) basis.push_back(from_integers(k, row));
  return basis;
}

ExactSeries hecke_apply(int n, const ExactSeries& f) {
  if (n < 1) throw InvalidArgument("hecke_apply: n must be >= 1");
  const int out_len = f.trunc() / n;
  const int k = f.weight;
  std::vector<mpq_class> out(static_cast<std::size_t>(out_len) + 1);
  mpz_class power;
  for (int m = 0; m <= out_len; ++m) {
    const int g = std::gcd(m, n);
    mpq_class acc = 0;
    for (int e = 1; e <= g; ++e) {
      if (g % e != 0) continue;
      mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k - 1));
      acc += power * f[m * n / (e * e)];
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return ExactSeries(k, std::move(out));
}

HeckeMatrix hecke_matrix(int n, int k, std::span<const ExactSeries> basis) {
  if (n < 2) throw InvalidArgument("hecke_matrix: n must be >= 2");
  const int d = dim_cusp(k);
  if (static_cast<int>(basis.size()) != d) {
    throw InvalidArgument("hecke_matrix: basis size does not match dim S_k");
  }
  HeckeMatrix t{n, k, d, std::vector<mpz_class>(static_cast<std::size_t>(d * d))};
  for (int j = 0; j < d; ++j) {
    const auto& f = basis[static_cast<std::size_t>(j)];
    if (f.weight != k) throw InvalidArgument("hecke_matrix: basis weight mismatch");
    if (f.trunc() < n * d) {
      throw InsufficientTruncation("hecke_matrix: need truncation >= " + std::to_string(n * d) + ", have " +
                                   std::to_string(f.trunc()));
    }
    const ExactSeries image = hecke_apply(n, f);
    for (int i = 1; i <= d; ++i) {
      const mpq_class& c = image[i];
      if (c.get_den() != 1) throw InvalidArgument("hecke_matrix: basis is not integral");
      t(i - 1, j) = c.get_num();
    }
  }
  return t;
}

std::string to_json(const ExactSeries& s) {
  nlohmann::json j;
  j["weight"] = s.weight;
  j["trunc"] = s.trunc();
  auto& coeffs = j["coeffs"] = nlohmann::json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(c.get_str());
  return j.dump();
}

ExactSeries series_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<mpq_class> coeffs;
    for (const auto& c : j.at("coeffs")) {
      mpq_class q(c.get<std::string>());
      q.canonicalize();
      coeffs.push_back(q);
    }
    if (static_cast<int>(coeffs.size()) != j.at("trunc").get<int>() + 1) {
      throw InvalidArgument("series JSON: trunc does not match coefficient count");
    }
    return ExactSeries(j.at("weight").get<int>(), std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("series JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidArgument(std::string("series JSON: bad rational: ") + e.what());
  }
}

}  // namespace modzero
