#pragma once

// Test-only oracles. Nothing here calls into the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pem/imaging.hpp"

namespace oracle {

inline pem::PixelPlane random_plane(int width, int height, std::mt19937_64& rng) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(width) * height);
  for (auto& v : s) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return pem::PixelPlane(width, height, std::move(s));
}

// Smooth-ish plane: a gradient plus small noise, closer to a photograph's
// residual statistics than uniform noise.
inline pem::PixelPlane smooth_plane(int width, int height, std::mt19937_64& rng) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(width) * height);
  const int base = static_cast<int>(rng() % 200);
  const int gx = static_cast<int>(rng() % 3), gy = static_cast<int>(rng() % 3);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      int v = base + (gx * c + gy * r) / 4 + static_cast<int>(rng() % 5) - 2;
      v = v < 0 ? 0 : (v > 255 ? 255 : v);
      s[static_cast<std::size_t>(r) * width + c] = static_cast<std::uint8_t>(v);
    }
  return pem::PixelPlane(width, height, std::move(s));
}

// Overflow code charts, transcribed: the shifted values per theta.
inline const std::map<int, std::vector<std::pair<int, int>>>& overflow_chart() {
  static const std::map<int, std::vector<std::pair<int, int>>> chart{
      {1, {{0, 1}, {255, 254}}},
      {2, {{0, 2}, {1, 3}, {254, 252}, {255, 253}}},
      {3, {{0, 3}, {1, 4}, {2, 5}, {253, 250}, {254, 251}, {255, 252}}},
  };
  return chart;
}

struct OverflowExpectation {
  int processed;
  std::optional<int> flag;
};

// Expected (processed value, flag) for one cover value: chart entries shift
// with flag 1; the keep bands [t, 2t-1] and [256-2t, 255-t] get flag 0.
inline OverflowExpectation overflow_expectation(int theta, int x) {
  for (const auto& [from, to] : overflow_chart().at(theta))
    if (from == x) return {to, 1};
  if ((x >= theta && x <= 2 * theta - 1) || (x >= 256 - 2 * theta && x <= 255 - theta))
    return {x, 0};
  return {x, std::nullopt};
}

// Modulation code chart cells inside the stego channel, transcribed per theta:
// (residual, payload prefix) -> modulated residual.
inline const std::map<int, std::map<std::pair<int, std::string>, int>>& modulation_chart() {
  static const std::map<int, std::map<std::pair<int, std::string>, int>> chart{
      {1, {{{0, "0"}, 0}, {{0, "10"}, -1}, {{0, "11"}, 1}}},
      {2,
       {{{0, "0"}, 0}, {{0, "10"}, -1}, {{0, "11"}, 1},
        {{-1, "0"}, -2}, {{-1, "1"}, -3}, {{1, "0"}, 2}, {{1, "1"}, 3}}},
      {3,
       {{{0, "0"}, 0}, {{0, "10"}, -1}, {{0, "11"}, 1},
        {{-1, "0"}, -2}, {{-1, "1"}, -3}, {{1, "0"}, 2}, {{1, "1"}, 3},
        {{-2, "0"}, -4}, {{-2, "1"}, -5}, {{2, "0"}, 4}, {{2, "1"}, 5}}},
  };
  return chart;
}

// Outside the channel the chart shifts by theta away from zero; its printed end
// points are -(255-theta) -> -255 and +(255-theta) -> +255.
inline int chart_shift(int theta, int residual) {
  return residual > 0 ? residual + theta : residual - theta;
}

// Gini coefficient by mean absolute difference, O(n^2).
inline double gini_mad(const std::vector<int>& magnitudes) {
  const double n = static_cast<double>(magnitudes.size());
  double sum = 0, mad = 0;
  for (int a : magnitudes) sum += a;
  if (sum == 0) return 0.0;
  for (int a : magnitudes)
    for (int b : magnitudes) mad += std::abs(a - b);
  return mad / (2.0 * n * sum);
}

}  // namespace oracle
