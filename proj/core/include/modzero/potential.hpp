#pragma once

#include <optional>
#include <vector>

#include "modzero/eigen.hpp"
#include "modzero/evaluate.hpp"
#include "modzero/zerofind.hpp"

namespace modzero {

/// phi(z) = exp(1 - 1/(1 - t^2)), t = |z - z0| / r, supported on the closed disk.
struct BumpFunction {
  UpperHalfPoint center;
  double radius = 0;

  /// Throws InvalidArgument unless 0 < radius < center.y.
  void validate() const;
  /// Bounding box of the support.
  BoxRegion support_box() const;
};

struct BumpValue {
  double value = 0;
  double grad_x = 0;
  double grad_y = 0;
  /// phi_xx + phi_yy.
  double laplacian_euclidean = 0;
  /// y^2 (phi_xx + phi_yy).
  double laplacian_hyperbolic = 0;
};

BumpValue bump_eval(const BumpFunction& phi, const UpperHalfPoint& z);

/// All gamma in PSL_2(Z) with gamma z in the closed box K, sorted.
std::vector<GroupElement> enumerate_translates(const UpperHalfPoint& z, const BoxRegion& K);

/// sum over gamma of phi(gamma z).
double F_phi(const BumpFunction& phi, const UpperHalfPoint& z);
/// sum over gamma of (L phi)(gamma z), L the hyperbolic Laplacian; equals L F_phi.
double F_laplacian_phi(const BumpFunction& phi, const UpperHalfPoint& z);

/// Zeros of zs in the box counted with multiplicity, over all their Gamma-images.
int zeros_in_box(const ZeroSet& zs, const BoxRegion& box);

struct IdentityCheck {
  int weight = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  BumpFunction phi;
  double quad_eps = 0;
  /// sum_j w(z_j) mult_j F_phi(z_j).
  double lhs = 0;
  /// k/12 (3/pi) int phi dxdy/y^2 + (1/2pi) int log(y^(k/2)|f|) Delta phi dxdy over supp phi.
  double rhs = 0;
  double diff = 0;
  /// Same identity integrated over F with F_phi and L F_phi in place of phi and Delta phi.
  double rhs_invariant = 0;
  double diff_invariant = 0;
  /// (3/pi) int_H phi dxdy/y^2 and (3/pi) int_F F_phi dxdy/y^2.
  double unfolded_volume = 0;
  double folded_volume = 0;
};

/// Checks sum_j w(z_j) F_phi(z_j) = k vol/(4 pi) int F_phi dV + (1/2pi) int log(y^(k/2)|f|) Delta phi,
/// in the Euclidean form over supp phi and in the Gamma-invariant form over F.
IdentityCheck check_zero_identity(const FormNumeric& f, const ZeroSet& zs, const BumpFunction& phi, double quad_eps);

/// (1/2pi) int log|z - z1| Delta phi dxdy, which equals phi(z1).
double point_charge_integral(const BumpFunction& phi, const UpperHalfPoint& z1, double quad_eps);

}  // namespace modzero
