#pragma once

#include <stdexcept>
#include <string>

namespace kqse {

// Base of every error raised by the library. The CLI maps ConfigError to exit
// code 2 and NumericalGateError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, empty bandwidth grid, inconsistent plan.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (alpha = 0,
// polynomial order above the supported cap, r = 0 optical setting, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A run-time numerical check failed: imaginary residue too large, support does
// not hold the required probability mass, a grid is missing entries.
class NumericalGateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateSettingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateSampleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SupportTooSmallError : public NumericalGateError {
 public:
  using NumericalGateError::NumericalGateError;
};

class IncompleteGridError : public NumericalGateError {
 public:
  using NumericalGateError::NumericalGateError;
};

class GridMismatchError : public NumericalGateError {
 public:
  using NumericalGateError::NumericalGateError;
};

class InvalidPilotError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TermBudgetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace kqse
