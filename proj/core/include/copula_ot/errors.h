#pragma once

#include <stdexcept>
#include <string>

namespace copula_ot {

// Root of every error thrown by the library. Each subclass is one error
// class; the CLI maps them onto stable exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input to a constructor (empty sample list, non-finite value, bad weights).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (u <= 0, dim < 2, length mismatch, p <= 1 ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A size guard was exceeded. Guards are never silently truncated.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature failed to converge, or an endpoint tail term does not vanish.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A caller-asserted hypothesis (moment order, ...) is missing.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A bivariate function assigned negative mass to some rectangle.
class InvalidJointError : public Error {
 public:
  using Error::Error;
};

// The exact solver could not certify its own result. Indicates a bug.
class CertificateError : public Error {
 public:
  using Error::Error;
};

}  // namespace copula_ot
