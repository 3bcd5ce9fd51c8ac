#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace stokes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (xi = 0, v = 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A parameter combination the operation does not handle (e.g. Bond numbers in deep water).
class UnsupportedConfiguration : public Error {
public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class MisuseError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration text or flags; maps to exit code 2 in the CLI.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// An iterative method failed. Carries machine-readable diagnostics.
class NumericalError : public Error {
public:
  NumericalError(const std::string& what, nlohmann::json diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const nlohmann::json& diagnostics() const noexcept { return diagnostics_; }

private:
  nlohmann::json diagnostics_;
};

class SearchFailure : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ExpansionDivergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class GridTooSmall : public Error {
public:
  using Error::Error;
};

class ProjectionLeak : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace stokes
