#pragma once

#include <stdexcept>
#include <string>

namespace modzero {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Not enough q-expansion coefficients to reach the requested accuracy.
class InsufficientTruncation : public Error {
 public:
  using Error::Error;
};

/// Two Hecke eigenvalues are closer than the working precision can separate.
class NearDegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// The weighted zero count plus the cusp order does not equal k/12.
class ValenceMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative method (root finder, quadrature, contour tracker) did not converge.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A normalized zero measure was requested for a form with no zeros in H.
class EmptyZeroSet : public Error {
 public:
  using Error::Error;
};

}  // namespace modzero
