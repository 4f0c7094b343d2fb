#pragma once

#include <stdexcept>
#include <string>

namespace mkg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, shape mismatch, bad axis, CFL violation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested Sobolev or commuted order outside the supported range.
class UnsupportedOrderError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Decay rate cannot be fitted because the field vanishes at the sample point.
class RateUndefinedError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, int iterations = 0)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Constraint drift or non-finite values detected during evolution.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace mkg
