#pragma once

#include <stdexcept>
#include <string>

namespace rankmoments {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duplicate values where a tie-free sample is required.
class TieError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// Constant coordinate, all-zero score matrix, and similar zero-variance inputs.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Correlation outside [-1, 1], non-PSD matrix, arcsin argument out of range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Pattern matrices failed their anchor checks.
class DerivationError : public Error {
 public:
  using Error::Error;
};

class NegativeVarianceError : public Error {
 public:
  using Error::Error;
};

/// Requested simulation exceeds the configured work budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class SeedError : public Error {
 public:
  using Error::Error;
};

/// Malformed grid spec, CSV input, or unreadable/unwritable file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankmoments
