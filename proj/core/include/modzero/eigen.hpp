#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modzero/qseries.hpp"
#include "modzero/real.hpp"

namespace modzero {

enum class FormKind { Eisenstein, Eigenform, Custom };

std::string to_string(FormKind kind);
FormKind form_kind_from_string(std::string_view text);

inline constexpr int kDefaultPrecisionBits = 192;

/// A level-one modular form given numerically by its q-expansion a(0..N).
struct FormNumeric {
  int weight = 0;
  FormKind kind = FormKind::Custom;
  std::vector<Real> coeffs;
  int ord_infinity = 0;
  int precision_bits = kDefaultPrecisionBits;
  std::optional<int> eigen_index;
  /// <f, f> = integral over F of |f|^2 y^k dx dy / y^2, once computed.
  std::optional<long double> petersson_norm;

  int trunc() const { return static_cast<int>(coeffs.size()) - 1; }
  const Real& operator[](int n) const { return coeffs[static_cast<std::size_t>(n)]; }
  /// Short stable identifier, e.g. "k24_eigenform1".
  std::string id() const;
};

struct EigenPair {
  Real eigenvalue;
  /// Normalized so that the first component is 1.
  std::vector<Real> eigenvector;
  /// |T v - lambda v|_inf / |v|_inf against the exact matrix.
  Real residual;
};

/// All eigenpairs of a Hecke matrix, eigenvalues ascending.
///
/// The dense solve runs at precision_bits plus the bit size of the largest entry
/// plus guard_bits; each pair is then polished by inverse iteration against the
/// exact integer matrix. Throws NearDegenerateSpectrum when two eigenvalues are
/// closer than 2^(-precision_bits/2) |T|.
std::vector<EigenPair> eigen_decompose(const HeckeMatrix& t, int precision_bits, int guard_bits = 0);

/// Coefficient count that covers zero finding on F at the given precision,
/// including the 25% extension used to reject spurious roots.
int default_form_truncation(int k, FormKind kind, int precision_bits = kDefaultPrecisionBits);

/// Every normalized cuspidal eigenform of weight k, sorted by T_2 eigenvalue.
std::vector<FormNumeric> eigenforms(int k, int N, int precision_bits = kDefaultPrecisionBits);

/// The eigenform of weight k at position index in the T_2-sorted list.
FormNumeric eigenform(int k, int index, int N, int precision_bits = kDefaultPrecisionBits);

FormNumeric eisenstein_form(int k, int N, int precision_bits = kDefaultPrecisionBits);

/// Wraps an exact series (e.g. Delta^2, or a combination of eigenforms) as a custom form.
FormNumeric custom_form(const ExactSeries& s, int precision_bits = kDefaultPrecisionBits);
FormNumeric custom_form(int weight, std::vector<Real> coeffs, int precision_bits = kDefaultPrecisionBits);

/// max over (m, n) of |a(m) a(n) - a(mn)| / (|a(mn)| + 1).
Real check_multiplicativity(const FormNumeric& f, std::span<const std::pair<int, int>> pairs);

std::string to_json(const FormNumeric& f);
FormNumeric form_from_json(std::string_view text);

}  // namespace modzero
