// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy shared by all mdsd modules.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdsd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (T <= 0, V <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unknown species, isotopologue or key.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed catalog record; carries the zero-based record index.
class ParseError : public Error {
 public:
  ParseError(std::size_t record, const std::string& what)
      : Error("record " + std::to_string(record) + ": " + what), record_(record) {}
  std::size_t record() const noexcept { return record_; }

 private:
  std::size_t record_;
};

/// Grid file problems; carries the one-based line number (0 when not line-specific).
class IngestError : public Error {
 public:
  IngestError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Not enough data for an estimator (empty baseline bin, < 2 usable links, ...).
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Interpolation method cannot run on the given samples (too few / collinear).
class MethodInfeasibleError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Visibility requested for zero dust attenuation.
class UndefinedVisibilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdsd
