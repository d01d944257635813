#pragma once

#include <complex>
#include <mutex>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <boost/multiprecision/mpfr.hpp>

namespace modzero {

/// Extended-precision real. Precision is chosen at runtime; see PrecisionScope.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Complex = std::complex<Real>;

/// Sets the precision of newly created Real values for the lifetime of the scope.
///
/// Boost keeps the mpfr default precision in a single process-wide variable, so
/// scopes are serialized through a recursive mutex: a thread holding a scope may
/// open nested scopes, other threads wait. Code that only reads existing Real
/// values (conversions, copies) does not need a scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  int bits() const { return bits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned previous_digits10_;
  int bits_;
};

/// Binary precision of an existing value.
int precision_bits(const Real& x);

Real to_real(const mpz_class& z);
Real to_real(const mpq_class& q);
Real real_pi();

/// Decimal string carrying enough digits to reproduce x at its own precision.
std::string to_decimal_string(const Real& x);
Real real_from_string(std::string_view text);

/// Copy of x rounded to the given binary precision.
Real with_precision(const Real& x, int bits);

}  // namespace modzero
