#include "pem/errors.hpp"

namespace pem {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::PayloadExhausted: return "PayloadExhausted";
    case ErrorCode::ReadPastEnd: return "ReadPastEnd";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidTheta: return "InvalidTheta";
    case ErrorCode::RegisterLengthMismatch: return "RegisterLengthMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DanglingInputRef: return "DanglingInputRef";
    case ErrorCode::GraphEvalError: return "GraphEvalError";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::DegenerateAllZero: return "DegenerateAllZero";
  }
  return "Unknown";
}

CapacityExceeded::CapacityExceeded(std::size_t required, std::size_t available)
    : Error(ErrorCode::CapacityExceeded,
            "capacity exceeded by " + std::to_string(required - available) +
                " bits (required " + std::to_string(required) + ", available " +
                std::to_string(available) + ")"),
      required_(required),
      available_(available) {}

}  // namespace pem
