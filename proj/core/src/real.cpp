#include "modzero/real.hpp"

#include <cmath>

#include <mpfr.h>

#include "modzero/errors.hpp"

namespace modzero {
namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

unsigned digits10_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

PrecisionScope::PrecisionScope(int bits)
    : lock_(precision_mutex()), previous_digits10_(Real::default_precision()), bits_(bits) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_digits10_); }

int precision_bits(const Real& x) {
  return static_cast<int>(mpfr_get_prec(x.backend().data()));
}

Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

std::string to_decimal_string(const Real& x) {
  const int bits = precision_bits(x);
  const auto digits = static_cast<std::streamsize>(std::ceil(bits * 0.30102999566398120)) + 2;
  return x.str(digits, std::ios_base::scientific);
}

Real real_from_string(std::string_view text) {
  Real r;
  if (mpfr_set_str(r.backend().data(), std::string(text).c_str(), 10, MPFR_RNDN) != 0) {
    throw InvalidArgument("not a decimal real: " + std::string(text));
  }
  return r;
}

}  // namespace modzero

namespace modzero {

Real with_precision(const Real& x, int bits) {
  Real r;
  mpfr_set_prec(r.backend().data(), static_cast<mpfr_prec_t>(bits));
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

}  // namespace modzero
