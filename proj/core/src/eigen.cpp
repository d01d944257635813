#include "modzero/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "modzero/errors.hpp"
#include "modzero/zerofind.hpp"

namespace modzero {
namespace {

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

int max_entry_bits(const HeckeMatrix& t) {
  std::size_t bits = 1;
  for (const auto& e : t.entries) bits = std::max(bits, mpz_sizeinbase(e.get_mpz_t(), 2));
  return static_cast<int>(bits);
}

int max_coeff_bits(std::span<const ExactSeries> basis) {
  std::size_t bits = 1;
  for (const auto& f : basis) {
    for (const auto& c : f.coeffs) {
      bits = std::max(bits, mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2));
    }
  }
  return static_cast<int>(bits);
}

Matrix to_matrix(const HeckeMatrix& t) {
  Matrix m(t.dim, t.dim);
  for (int i = 0; i < t.dim; ++i) {
    for (int j = 0; j < t.dim; ++j) m(i, j) = to_real(t(i, j));
  }
  return m;
}

Real inf_norm(const Vector& v) {
  Real best = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, Real(abs(v(i))));
  return best;
}

// One inverse-iteration step, renormalized to v(0) = 1, followed by a fresh
// eigenvalue estimate from the first row. The shift is offset by `delta` so the
// system stays regular when lambda is already exact.
void polish(const Matrix& t, Real& lambda, Vector& v, const Real& delta) {
  const Eigen::Index d = t.rows();
  Matrix shifted = t - (lambda + delta) * Matrix::Identity(d, d);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Vector w = lu.solve(v);
  bool finite = true;
  for (Eigen::Index i = 0; i < d; ++i) finite = finite && boost::multiprecision::isfinite(w(i));
  if (finite && w(0) != 0) v = w / w(0);
  const Vector tv = t * v;
  lambda = tv(0) / v(0);
}

}  // namespace

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::Eisenstein: return "eisenstein";
    case FormKind::Eigenform: return "eigenform";
    case FormKind::Custom: return "custom";
  }
  return "custom";
}

FormKind form_kind_from_string(std::string_view text) {
  if (text == "eisenstein") return FormKind::Eisenstein;
  if (text == "eigenform") return FormKind::Eigenform;
  if (text == "custom") return FormKind::Custom;
  throw InvalidArgument("unknown form kind: " + std::string(text));
}

std::string FormNumeric::id() const {
  std::string s = "k" + std::to_string(weight) + "_" + to_string(kind);
  if (eigen_index) s += std::to_string(*eigen_index);
  return s;
}

std::vector<EigenPair> eigen_decompose(const HeckeMatrix& t, int precision_bits, int guard_bits) {
  if (precision_bits < 64) throw InvalidArgument("eigen_decompose: precision_bits must be >= 64");
  const int d = t.dim;
  if (d == 0) return {};
  const int working_bits = precision_bits + max_entry_bits(t) + guard_bits + 64;
  PrecisionScope scope(working_bits);

  const Matrix m = to_matrix(t);
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(d));

  if (d == 1) {
    pairs.push_back({m(0, 0), {Real(1)}, Real(0)});
    return pairs;
  }

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigen_decompose: dense eigensolver failed");

  const auto values_raw = solver.eigenvalues();
  // T is self-adjoint for the Petersson product, so its operator norm there is
  // the spectral radius; the Miller-basis entry norm is far larger.
  Real norm = 0;
  for (int i = 0; i < d; ++i) norm = std::max(norm, Real(abs(values_raw(i))));
  Real entry_norm = 0;
  for (int i = 0; i < d; ++i) {
    Real row = 0;
    for (int j = 0; j < d; ++j) row += abs(m(i, j));
    entry_norm = std::max(entry_norm, row);
  }

  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();
  for (int i = 0; i < d; ++i) {
    if (abs(values(i).imag()) > norm * pow(Real(2), -precision_bits / 2)) {
      throw NonConvergence("eigen_decompose: complex eigenvalue from a self-adjoint operator");
    }
    Real lambda = values(i).real();
    Vector v(d);
    for (int j = 0; j < d; ++j) v(j) = vectors(j, i).real();
    if (v(0) == 0) throw NonConvergence("eigen_decompose: eigenvector with vanishing first coefficient");
    v /= Real(v(0));
    const Real delta = entry_norm * pow(Real(2), -working_bits / 2);
    polish(m, lambda, v, delta);
    polish(m, lambda, v, delta);
    const Vector r = m * v - lambda * v;
    EigenPair p{lambda, {}, inf_norm(r) / inf_norm(v)};
    p.eigenvector.assign(v.data(), v.data() + d);
    pairs.push_back(std::move(p));
  }

  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.eigenvalue < b.eigenvalue; });
  const Real gap_floor = norm * pow(Real(2), -precision_bits / 2);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].eigenvalue - pairs[i - 1].eigenvalue < gap_floor) {
      throw NearDegenerateSpectrum("eigen_decompose: near-degenerate spectrum of T_" + std::to_string(t.n) +
                                   " in weight " + std::to_string(t.weight));
    }
  }
  return pairs;
}

namespace {

// Smallest n past the peak of beta ln n + n log_r whose geometric tail bound is
// below target relative to the peak.
int cutoff_for(double beta, double log_r, double target) {
  double peak = -INFINITY;
  for (int n = 1; n < 200000; ++n) {
    const double term = beta * std::log(n) + n * log_r;
    peak = std::max(peak, term);
    const double ratio = beta / n + log_r;
    if (ratio < -0.05 && term - std::log1p(-std::exp(ratio)) - peak < target) return n;
  }
  throw InvalidArgument("default_form_truncation: weight too large");
}

}  // namespace

int default_form_truncation(int k, FormKind kind, int precision_bits) {
  // Coefficient growth exponent: Deligne for cusp forms, sigma_{k-1} otherwise.
  const double beta = kind == FormKind::Eigenform ? (k + 1) / 2.0 : k - 1.0;
  const double log_r = -M_PI * std::sqrt(3.0) + std::log1p(2e-3);
  const int half = cutoff_for(beta, log_r, -0.5 * precision_bits * std::log(2.0));
  const int full = cutoff_for(beta, log_r, -precision_bits * std::log(2.0) - 20.0);
  return std::max(static_cast<int>(std::ceil(1.25 * half)), full) + 8;
}

std::vector<FormNumeric> eigenforms(int k, int N, int precision_bits) {
  const int d = dim_cusp(k);
  if (d == 0) return {};
  const int basis_len = std::max(N, 2 * d);
  const auto basis = miller_basis(k, basis_len);
  const HeckeMatrix t2 = hecke_matrix(2, k, basis);
  const int coeff_bits = max_coeff_bits(basis);
  const auto pairs = eigen_decompose(t2, precision_bits, coeff_bits);

  std::vector<FormNumeric> forms;
  forms.reserve(pairs.size());
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& v = pairs[idx].eigenvector;
    FormNumeric f;
    f.weight = k;
    f.kind = FormKind::Eigenform;
    f.ord_infinity = 1;
    f.precision_bits = precision_bits;
    f.eigen_index = static_cast<int>(idx);
    f.coeffs.reserve(static_cast<std::size_t>(N) + 1);
    {
      PrecisionScope scope(modzero::precision_bits(v.front()));
      for (int n = 0; n <= N; ++n) {
        Real acc = 0;
        for (int j = 0; j < d; ++j) {
          const mpq_class& c = basis[static_cast<std::size_t>(j)][n];
          if (c != 0) acc += v[static_cast<std::size_t>(j)] * to_real(c);
        }
        f.coeffs.push_back(with_precision(acc, precision_bits));
      }
    }
    forms.push_back(std::move(f));
  }
  return forms;
}

FormNumeric eigenform(int k, int index, int N, int precision_bits) {
  const int d = dim_cusp(k);
  if (index < 0 || index >= d) {
    throw InvalidArgument("eigenform: index " + std::to_string(index) + " outside [0, " + std::to_string(d) + ")");
  }
  auto forms = eigenforms(k, N, precision_bits);
  return std::move(forms[static_cast<std::size_t>(index)]);
}

FormNumeric eisenstein_form(int k, int N, int precision_bits) {
  FormNumeric f = custom_form(eisenstein_qexp(k, N), precision_bits);
  f.kind = FormKind::Eisenstein;
  return f;
}

FormNumeric custom_form(const ExactSeries& s, int precision_bits) {
  std::vector<Real> coeffs;
  coeffs.reserve(s.coeffs.size());
  {
    PrecisionScope scope(precision_bits);
    for (const auto& c : s.coeffs) coeffs.push_back(to_real(c));
  }
  return custom_form(s.weight, std::move(coeffs), precision_bits);
}

FormNumeric custom_form(int weight, std::vector<Real> coeffs, int precision_bits) {
  if (weight % 2 != 0 || weight < 0) throw InvalidArgument("custom_form: weight must be even and >= 0");
  if (precision_bits < 64) throw InvalidArgument("custom_form: precision_bits must be >= 64");
  if (coeffs.empty()) throw InvalidArgument("custom_form: no coefficients");
  FormNumeric f;
  f.weight = weight;
  f.kind = FormKind::Custom;
  f.precision_bits = precision_bits;
  f.coeffs = std::move(coeffs);
  f.ord_infinity = ord_infinity(f);
  return f;
}

Real check_multiplicativity(const FormNumeric& f, std::span<const std::pair<int, int>> pairs) {
  PrecisionScope scope(f.precision_bits);
  Real worst = 0;
  for (const auto& [m, n] : pairs) {
    if (std::gcd(m, n) != 1) throw InvalidArgument("check_multiplicativity: pair is not coprime");
    if (m * n > f.trunc()) throw InsufficientTruncation("check_multiplicativity: a(mn) not available");
    const Real err = abs(f[m] * f[n] - f[m * n]) / (abs(f[m * n]) + 1);
    worst = std::max(worst, err);
  }
  return worst;
}

std::string to_json(const FormNumeric& f) {
  nlohmann::json j;
  j["schema"] = "modzero/1";
  j["weight"] = f.weight;
  j["kind"] = to_string(f.kind);
  j["eigen_index"] = f.eigen_index ? nlohmann::json(*f.eigen_index) : nlohmann::json(nullptr);
  j["ord_infinity"] = f.ord_infinity;
  j["precision_bits"] = f.precision_bits;
  auto& coeffs = j["coeffs"] = nlohmann::json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(to_decimal_string(c));
  return j.dump(1);
}

FormNumeric form_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("schema", std::string()) != "modzero/1") throw InvalidArgument("form JSON: schema is not modzero/1");
    FormNumeric f;
    f.weight = j.at("weight").get<int>();
    f.kind = form_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("eigen_index").is_null()) f.eigen_index = j.at("eigen_index").get<int>();
    f.ord_infinity = j.at("ord_infinity").get<int>();
    f.precision_bits = j.at("precision_bits").get<int>();
    PrecisionScope scope(f.precision_bits);
    for (const auto& c : j.at("coeffs")) f.coeffs.push_back(real_from_string(c.get<std::string>()));
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("form JSON: ") + e.what());
  }
}

}  // namespace modzero
