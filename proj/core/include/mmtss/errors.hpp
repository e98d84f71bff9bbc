// Copyright 2026 MMTSS Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MMTSS_ERRORS_HPP_
#define MMTSS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mmtss {

// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed on-disk data (bad WAV header, bad tensor magic, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structurally valid container holding an encoding we do not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Payload inconsistent with its own header (dims vs byte count, ...).
class CorruptionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Filesystem-level failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Caller violated a precondition or produced out-of-contract values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested T60 cannot be realized for the given room volume/surface.
class InfeasibleT60Error : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Random placement could not satisfy the geometric constraints.
class PlacementError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmtss

#endif  // MMTSS_ERRORS_HPP_
