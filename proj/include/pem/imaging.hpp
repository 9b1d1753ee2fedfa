#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace pem {

// Row-major 8-bit greyscale plane.
class PixelPlane {
 public:
  PixelPlane() = default;
  PixelPlane(int width, int height, std::uint8_t fill = 0);
  // Throws Error(DimensionMismatch) when samples.size() != width * height.
  PixelPlane(int width, int height, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }

  std::uint8_t at(int row, int col) const {
    return samples_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::uint8_t& at(int row, int col) {
    return samples_[static_cast<std::size_t>(row) * width_ + col];
  }

  const std::vector<std::uint8_t>& samples() const noexcept { return samples_; }
  std::vector<std::uint8_t>& samples() noexcept { return samples_; }

  friend bool operator==(const PixelPlane&, const PixelPlane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

// Chequerboard parity with 0-based coordinates: (0,0) is white.
enum class Side { Black, White };

constexpr Side side_of(int row, int col) noexcept {
  return ((row + col) & 1) ? Side::Black : Side::White;
}

constexpr Side opposite(Side s) noexcept {
  return s == Side::Black ? Side::White : Side::Black;
}

const char* to_string(Side s);

// Number of pixels of one colour on a width x height board.
std::size_t side_count(Side side, int width, int height);

// Samples of one colour, listed in raster order of their coordinates.
struct MaskedSamples {
  Side side = Side::White;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;
};

struct SplitPlanes {
  MaskedSamples black;
  MaskedSamples white;
};

// Throws Error(ImageTooSmall) below 2x2.
SplitPlanes split(const PixelPlane& img);
// Throws Error(DimensionMismatch) unless the two sides tile the same board.
PixelPlane merge(const MaskedSamples& black, const MaskedSamples& white);

// P5 with maxval 255, header "P5 <w> <h> 255" separated by whitespace.
PixelPlane read_pgm(const std::filesystem::path& path);
void write_pgm(const PixelPlane& img, const std::filesystem::path& path);

}  // namespace pem
