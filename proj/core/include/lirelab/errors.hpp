// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lirelab {

/// Base class for every error raised by lirelab.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A token id outside [0, V) or an EOS in a non-final position.
class InvalidTokenError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the 10^6 sequence guard.
class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or out-of-range configuration (T <= 0, shape mismatch, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's mathematical domain (empty list, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the optimizer when a gradient contains NaN or Inf.
class TrainingAborted : public Error {
 public:
  using Error::Error;
};

/// The finite-difference oracle hit a non-finite loss.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace lirelab
