#pragma once

#include <stdexcept>
#include <string>

namespace qrand {

/// Base class for all input-validation failures. Messages name the violated
/// invariant together with the measured violation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPSD : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TraceNotOne : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BasisNotOrthonormal : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NormExceedsOne : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotADistribution : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed or non-finite content in a state/scenario file.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace qrand
