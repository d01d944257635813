#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modzero/eigen.hpp"
#include "modzero/evaluate.hpp"

namespace modzero {

/// Order of vanishing at the cusp.
///
/// Coefficients are compared as terms a(n) r^n at r = e^(-pi sqrt 3), the
/// largest |q| on F: ord is the first n whose term exceeds
/// 2^(-precision_bits/2) times the largest term.
int ord_infinity(const FormNumeric& f);

struct ZeroFindOptions {
  double radius_margin = 1e-3;
  /// Roots closer than this in the q-plane are one zero with multiplicity.
  double cluster_tol = 1e-8;
  /// Hyperbolic distance below which reduced zeros are identified.
  double merge_tol = 1e-8;
  /// Hyperbolic distance to i or rho that assigns a stabilizer weight.
  double elliptic_tol = 1e-6;
  int max_iterations = 600;
};

/// A root q of f(q) / q^ord inside the disk, polished at the form's precision.
struct QRoot {
  Complex q;
  int multiplicity = 1;
  /// ln(|f(q)| / sum |a(n) q^n|) after polishing.
  double residual_log = 0;
  /// |q| within the radius margin of the disk boundary.
  bool near_boundary = false;
};

/// Roots of sum_{n >= ord} a(n) q^(n - ord) with |q| <= radius.
///
/// Candidates come from an Aberth iteration in long double on the polynomial
/// truncated where the tail is below 2^(-precision_bits/2); each candidate is
/// then polished by Newton's method against a series at least 25% longer and
/// kept only if that lowers its residual. Clusters closer than cluster_tol
/// become one root with multiplicity.
std::vector<QRoot> roots_in_qdisk(const FormNumeric& f, const Real& radius, int precision_bits,
                                  const ZeroFindOptions& options = {});

/// e^(-pi sqrt 3) (1 + margin).
Real default_qdisk_radius(double margin = 1e-3);

struct ZeroRecord {
  UpperHalfPoint point;
  int multiplicity = 1;
  mpq_class stab_weight = 1;
  double residual_log = 0;
};

struct ZeroSet {
  int weight = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  /// Sorted by (im descending, re ascending).
  std::vector<ZeroRecord> records;
  int ord_infinity = 0;
  mpq_class nu = 0;

  std::string id() const;
};

/// Gamma-inequivalent zeros of f in F. Throws ValenceMismatch unless
/// nu + ord_infinity = k/12 exactly.
ZeroSet zeros_in_F(const FormNumeric& f, const ZeroFindOptions& options = {});

/// Number of zeros of f inside the box, with multiplicity, from the winding of
/// arg f along its boundary. Throws NonConvergence if the phase cannot be
/// tracked (a zero on or very near the contour).
int argument_principle_count(const FormNumeric& f, const BoxRegion& box);

/// The elliptic points i and rho = (-1 + i sqrt 3) / 2.
inline UpperHalfPoint point_i() { return {0.0, 1.0}; }
inline UpperHalfPoint point_rho() { return {-0.5, 0.86602540378443864676}; }

}  // namespace modzero
