#pragma once

#include <stdexcept>
#include <string>

namespace rsquad {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed parameters, points outside a domain, bad node ordering.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested theorem's hypotheses are not met by the catalog metadata.
class HypothesisMismatch : public Error {
 public:
  using Error::Error;
};

/// f and u share a discontinuity, so the Riemann-Stieltjes integral does not exist.
class IntegralDoesNotExist : public Error {
 public:
  using Error::Error;
};

/// Refinement cap reached before the convergence criterion was met.
class OracleNonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace rsquad
