#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "pem/codec.hpp"
#include "pem/imaging.hpp"

namespace pem {

// +infinity marks identical planes.
inline constexpr double kIdenticalPsnr = std::numeric_limits<double>::infinity();

// 10*log10(255^2 / MSE). Throws Error(DimensionMismatch).
double psnr(const PixelPlane& a, const PixelPlane& b);

// Mean SSIM, 11x11 Gaussian window (sigma 1.5), K1 0.01, K2 0.03, L 255.
// Throws Error(DimensionMismatch) or Error(ImageTooSmall) below 11x11.
double ssim(const PixelPlane& a, const PixelPlane& b);

struct QualityReport {
  double psnr_db = 0;
  double ssim = 0;
  double bpp = 0;
};

// Message bits per pixel.
double embedding_rate(std::size_t message_bits, const PixelPlane& img);

// Histogram over signed errors -255..255.
class ErrorDistribution {
 public:
  static constexpr int kMaxError = 255;

  void add(int error, std::uint64_t count = 1);
  std::uint64_t count(int error) const { return counts_[error + kMaxError]; }
  std::uint64_t total() const noexcept { return total_; }
  // Counts per magnitude 0..255.
  std::array<std::uint64_t, kMaxError + 1> magnitudes() const;

 private:
  std::array<std::uint64_t, 2 * kMaxError + 1> counts_{};
  std::uint64_t total_ = 0;
};

// Errors x - y over the query side.
ErrorDistribution query_errors(const PixelPlane& actual, const PredictedPlane& predicted,
                               Side query);

struct ErrorStats {
  double entropy_bits = 0;  // Shannon entropy of the signed-error PDF
  double variance = 0;      // population variance of signed errors
  int p95 = 0;              // smallest M with >= 95% of |e| <= M
  double gini = 0;          // over magnitudes; 0 when all are zero
};

// Throws Error(EmptyDistribution) when total() == 0.
ErrorStats error_stats(const ErrorDistribution& d);

struct LorenzPoint {
  double population;  // cumulative share of samples, ascending magnitude
  double magnitude;   // cumulative share of total magnitude
};

// Polyline from (0,0) to (1,1) with one vertex per distinct magnitude.
// Throws Error(EmptyDistribution) or Error(DegenerateAllZero).
std::vector<LorenzPoint> lorenz_curve(const ErrorDistribution& d);
// 1 - 2 * trapezoid area under the curve.
double gini_from_lorenz(const std::vector<LorenzPoint>& curve);

// ---------------------------------------------------------------------------
// Rate-distortion sweeps

struct RdRow {
  int theta = 0;
  double fraction = 0;          // requested share of conservative capacity
  std::size_t message_bits = 0; // bits actually embedded
  double bpp = 0;
  double psnr_db = 0;
  double ssim = 0;
};

struct RdOptions {
  std::vector<int> thetas{1, 2, 3};
  int steps = 10;  // fractions 0, 1/steps, ..., 1
  std::uint64_t seed = 1;
};

// For each theta, embeds seeded pseudo-random messages at each fraction of the
// conservative capacity (the 0 row carries only the framing). When a message
// near full capacity does not fit on the second layer, it is trimmed until it
// does. Rows come out ordered by theta then fraction.
std::vector<RdRow> rd_curve(const PixelPlane& cover, const StegoParams& base,
                            const RdOptions& options);

// Deterministic message bits from a seed; a shorter message is a prefix of a
// longer one with the same seed.
BitStream seeded_message(std::size_t bits, std::uint64_t seed);

}  // namespace pem
