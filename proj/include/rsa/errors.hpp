// Copyright 2026 The rsa-mf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rsa {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (p < 2, c > 1, m > 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An iterative refinement failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A requested problem exceeds a configured size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for the requested model mode.
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// Predicate used by a threshold search is constant over the search interval.
class NoThresholdError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsa
