// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mertens-lattice Authors

#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The caller must retry at a higher working precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// A zero table does not reach far enough in gamma for the requested sum.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Work and verify evaluations disagree; usually a sign of a table that
// carries too few digits.
class DisagreementError : public Error {
 public:
  using Error::Error;
};

class BlockTooLargeError : public Error {
 public:
  using Error::Error;
};

class TableTooSmallError : public Error {
 public:
  using Error::Error;
};

}  // namespace mertens
