#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pem {

enum class ErrorCode {
  CapacityExceeded,
  MalformedPayload,
  PayloadExhausted,
  ReadPastEnd,
  ImageTooSmall,
  DimensionMismatch,
  UnsupportedFormat,
  IoError,
  InvalidTheta,
  RegisterLengthMismatch,
  BadMagic,
  VersionUnsupported,
  ShapeMismatch,
  DanglingInputRef,
  GraphEvalError,
  EmptyDistribution,
  DegenerateAllZero,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when a message does not fit; carries the numbers the CLI reports.
class CapacityExceeded : public Error {
 public:
  CapacityExceeded(std::size_t required, std::size_t available);

  std::size_t required() const noexcept { return required_; }
  std::size_t available() const noexcept { return available_; }
  std::size_t shortfall() const noexcept { return required_ - available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

}  // namespace pem
