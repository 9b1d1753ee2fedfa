#include "pem/overflow.hpp"

#include <string>

#include "pem/errors.hpp"

namespace pem {

void check_theta(int theta) {
  if (theta < kMinTheta || theta > kMaxTheta)
    throw Error(ErrorCode::InvalidTheta,
                "theta must be in [" + std::to_string(kMinTheta) + ", " +
                    std::to_string(kMaxTheta) + "], got " + std::to_string(theta));
}

OverflowIntervals OverflowIntervals::for_theta(int theta) {
  check_theta(theta);
  return {
      {theta, 2 * theta - 1},
      {0, theta - 1},
      {255 - 2 * theta + 1, 255 - theta},
      {255 - theta + 1, 255},
  };
}

Preprocessed preprocess(const PixelPlane& x, int theta) {
  const auto bands = OverflowIntervals::for_theta(theta);
  Preprocessed out{x, {}};
  for (auto& s : out.plane.samples()) {
    const int v = s;
    if (bands.upper_shift.contains(v)) {
      s = static_cast<std::uint8_t>(v - theta);
      out.reg.push_back(1);
    } else if (bands.upper_keep.contains(v)) {
      out.reg.push_back(0);
    } else if (bands.lower_shift.contains(v)) {
      s = static_cast<std::uint8_t>(v + theta);
      out.reg.push_back(1);
    } else if (bands.lower_keep.contains(v)) {
      out.reg.push_back(0);
    }
  }
  return out;
}

std::size_t count_register_bits(const PixelPlane& processed, int theta) {
  const auto bands = OverflowIntervals::for_theta(theta);
  std::size_t n = 0;
  for (std::uint8_t s : processed.samples())
    if (bands.lower_keep.contains(s) || bands.upper_keep.contains(s)) ++n;
  return n;
}

PixelPlane postprocess(const PixelPlane& processed, const BitStream& reg, int theta) {
  const auto bands = OverflowIntervals::for_theta(theta);
  const std::size_t expected = count_register_bits(processed, theta);
  if (reg.size() != expected)
    throw Error(ErrorCode::RegisterLengthMismatch,
                "register has " + std::to_string(reg.size()) + " bits, plane needs " +
                    std::to_string(expected));
  PixelPlane x = processed;
  std::size_t t = 0;
  for (auto& s : x.samples()) {
    const int v = s;
    if (bands.upper_keep.contains(v)) {
      if (reg[t++]) s = static_cast<std::uint8_t>(v + theta);
    } else if (bands.lower_keep.contains(v)) {
      if (reg[t++]) s = static_cast<std::uint8_t>(v - theta);
    }
  }
  return x;
}

}  // namespace pem
