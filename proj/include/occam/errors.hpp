#pragma once

#include <stdexcept>
#include <string>

namespace occam {

/// Base class for all toolkit errors. `code()` is the stable,
/// machine-readable identifier used by the CLI error channel.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept { return "error"; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "validation"; }
};

class FormatError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "format"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "io"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "dimension"; }
};

class BudgetError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "budget"; }
};

class TransportError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "transport"; }
};

class SnrUndefinedError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "snr-undefined"; }
};

class InvalidStartError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "invalid-start"; }
};

}  // namespace occam
