#pragma once

#include <cstddef>

#include "pem/bitstream.hpp"
#include "pem/imaging.hpp"

namespace pem {

inline constexpr int kMinTheta = 1;
inline constexpr int kMaxTheta = 63;

// Throws Error(InvalidTheta) outside [kMinTheta, kMaxTheta].
void check_theta(int theta);

struct Interval {
  int lo;
  int hi;
  constexpr bool contains(int v) const noexcept { return lo <= v && v <= hi; }
};

// Boundary bands for a given theta. Values in lower_shift/upper_shift get moved
// by theta into lower_keep/upper_keep, and every pixel that ends up in a keep
// band gets one register flag.
struct OverflowIntervals {
  Interval lower_keep;   // [theta, 2*theta-1]
  Interval lower_shift;  // [0, theta-1]
  Interval upper_keep;   // [256-2*theta, 255-theta]
  Interval upper_shift;  // [256-theta, 255]

  static OverflowIntervals for_theta(int theta);
};

struct Preprocessed {
  PixelPlane plane;  // every sample in [theta, 255-theta]
  BitStream reg;     // raster order, 1 = shifted
};

Preprocessed preprocess(const PixelPlane& x, int theta);

// Inverse of preprocess. Throws Error(RegisterLengthMismatch) if the register
// length differs from count_register_bits(processed, theta).
PixelPlane postprocess(const PixelPlane& processed, const BitStream& reg, int theta);

// Pixels that will consume a register flag on the way back.
std::size_t count_register_bits(const PixelPlane& processed, int theta);

}  // namespace pem
