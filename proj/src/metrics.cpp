#include "pem/metrics.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pem/errors.hpp"
#include "pem/kernels.hpp"

namespace pem {

namespace {

void check_same_dims(const PixelPlane& a, const PixelPlane& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorCode::DimensionMismatch,
                "planes differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

}  // namespace

double psnr(const PixelPlane& a, const PixelPlane& b) {
  check_same_dims(a, b);
  const std::uint64_t sse = kernels::squared_error(a.samples(), b.samples());
  if (sse == 0) return kIdenticalPsnr;
  const double mse = static_cast<double>(sse) / static_cast<double>(a.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const PixelPlane& a, const PixelPlane& b) {
  check_same_dims(a, b);
  return kernels::ssim_mean(a.samples(), b.samples(), a.width(), a.height());
}

double embedding_rate(std::size_t message_bits, const PixelPlane& img) {
  return img.size() ? static_cast<double>(message_bits) / static_cast<double>(img.size()) : 0.0;
}

void ErrorDistribution::add(int error, std::uint64_t count) {
  if (error < -kMaxError || error > kMaxError)
    throw Error(ErrorCode::DimensionMismatch, "error " + std::to_string(error) + " out of range");
  counts_[error + kMaxError] += count;
  total_ += count;
}

std::array<std::uint64_t, ErrorDistribution::kMaxError + 1> ErrorDistribution::magnitudes() const {
  std::array<std::uint64_t, kMaxError + 1> out{};
  for (int e = -kMaxError; e <= kMaxError; ++e) out[std::abs(e)] += count(e);
  return out;
}

ErrorDistribution query_errors(const PixelPlane& actual, const PredictedPlane& predicted,
                               Side query) {
  if (actual.width() != predicted.width || actual.height() != predicted.height)
    throw Error(ErrorCode::DimensionMismatch, "prediction does not match the plane");
  ErrorDistribution d;
  for (int r = 0; r < actual.height(); ++r)
    for (int c = 0; c < actual.width(); ++c)
      if (side_of(r, c) == query) d.add(static_cast<int>(actual.at(r, c)) - predicted.at(r, c));
  return d;
}

ErrorStats error_stats(const ErrorDistribution& d) {
  if (d.total() == 0) throw Error(ErrorCode::EmptyDistribution, "no errors recorded");
  const double n = static_cast<double>(d.total());
  ErrorStats s;

  double mean = 0;
  for (int e = -ErrorDistribution::kMaxError; e <= ErrorDistribution::kMaxError; ++e) {
    const std::uint64_t k = d.count(e);
    if (!k) continue;
    const double p = static_cast<double>(k) / n;
    s.entropy_bits -= p * std::log2(p);
    mean += p * e;
  }
  for (int e = -ErrorDistribution::kMaxError; e <= ErrorDistribution::kMaxError; ++e) {
    const std::uint64_t k = d.count(e);
    if (k) s.variance += static_cast<double>(k) / n * (e - mean) * (e - mean);
  }
  if (s.entropy_bits == 0.0) s.entropy_bits = 0.0;  // no -0

  const auto mags = d.magnitudes();
  std::uint64_t cum = 0;
  for (int m = 0; m <= ErrorDistribution::kMaxError; ++m) {
    cum += mags[m];
    if (100 * cum >= 95 * d.total()) {
      s.p95 = m;
      break;
    }
  }

  // Rank-sum form over ascending magnitudes: G = 2*sum(i*x_i)/(n*sum x) - (n+1)/n.
  double rank_weighted = 0, sum = 0, rank = 0;
  for (int m = 0; m <= ErrorDistribution::kMaxError; ++m) {
    const double k = static_cast<double>(mags[m]);
    if (k == 0) continue;
    rank_weighted += m * (k * rank + k * (k + 1) / 2);
    sum += m * k;
    rank += k;
  }
  s.gini = sum > 0 ? 2 * rank_weighted / (n * sum) - (n + 1) / n : 0.0;
  return s;
}

std::vector<LorenzPoint> lorenz_curve(const ErrorDistribution& d) {
  if (d.total() == 0) throw Error(ErrorCode::EmptyDistribution, "no errors recorded");
  const auto mags = d.magnitudes();
  std::uint64_t total_mag = 0;
  for (int m = 0; m <= ErrorDistribution::kMaxError; ++m) total_mag += m * mags[m];
  if (total_mag == 0)
    throw Error(ErrorCode::DegenerateAllZero, "all error magnitudes are zero");

  std::vector<LorenzPoint> curve{{0.0, 0.0}};
  std::uint64_t cum_n = 0, cum_mag = 0;
  for (int m = 0; m <= ErrorDistribution::kMaxError; ++m) {
    if (!mags[m]) continue;
    cum_n += mags[m];
    cum_mag += m * mags[m];
    curve.push_back({static_cast<double>(cum_n) / static_cast<double>(d.total()),
                     static_cast<double>(cum_mag) / static_cast<double>(total_mag)});
  }
  return curve;
}

double gini_from_lorenz(const std::vector<LorenzPoint>& curve) {
  double area = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].population - curve[i - 1].population) *
            (curve[i].magnitude + curve[i - 1].magnitude) / 2;
  return 1.0 - 2.0 * area;
}

BitStream seeded_message(std::size_t bits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(bits);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < bits; ++i) {
    if (i % 64 == 0) word = rng();
    out[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1u);
  }
  return BitStream(std::move(out));
}

std::vector<RdRow> rd_curve(const PixelPlane& cover, const StegoParams& base,
                            const RdOptions& options) {
  if (options.steps < 1) throw Error(ErrorCode::DimensionMismatch, "rd_curve needs steps >= 1");
  std::vector<RdRow> rows;
  for (int theta : options.thetas) {
    StegoParams params = base;
    params.theta = theta;
    const std::size_t capacity = estimate_capacity(cover, params);
    const BitStream full = seeded_message(capacity, options.seed);
    for (int step = 0; step <= options.steps; ++step) {
      std::size_t bits = capacity * static_cast<std::size_t>(step) / options.steps;
      for (;;) {
        const BitStream message(std::vector<std::uint8_t>(
            full.bits().begin(), full.bits().begin() + static_cast<std::ptrdiff_t>(bits)));
        try {
          const PixelPlane stego = encode(cover, message, params);
          rows.push_back({theta, static_cast<double>(step) / options.steps, bits,
                          embedding_rate(bits, cover), psnr(cover, stego), ssim(cover, stego)});
          break;
        } catch (const CapacityExceeded& e) {
          if (bits == 0) throw;
          bits -= std::min(bits, std::max<std::size_t>(e.shortfall(), 1));
        }
      }
    }
  }
  return rows;
}

}  // namespace pem
