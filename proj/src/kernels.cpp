#include "pem/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pem/errors.hpp"

namespace pem::kernels {

namespace {

inline std::uint8_t rounded_mean(int sum, int n) {
  // floor(sum / n + 1/2) for non-negative sums.
  return static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
}

inline std::uint8_t local_mean_at(const std::uint8_t* src, int width, int height, int r,
                                  int c) {
  int sum = 0, n = 0;
  const std::size_t i = static_cast<std::size_t>(r) * width + c;
  if (r > 0) { sum += src[i - width]; ++n; }
  if (r + 1 < height) { sum += src[i + width]; ++n; }
  if (c > 0) { sum += src[i - 1]; ++n; }
  if (c + 1 < width) { sum += src[i + 1]; ++n; }
  return n ? rounded_mean(sum, n) : src[i];
}

void check_plane(std::size_t src, std::size_t dst, int width, int height) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (src != n || dst != n)
    throw Error(ErrorCode::DimensionMismatch, "local_mean buffer sizes do not match the plane");
}

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

std::array<double, kWin> gaussian_taps() {
  std::array<double, kWin> g{};
  double total = 0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - kWin / 2;
    g[i] = std::exp(-(d * d) / (2 * kSigma * kSigma));
    total += g[i];
  }
  for (auto& v : g) v /= total;
  return g;
}

inline double ssim_from_moments(double ma, double mb, double saa, double sbb, double sab) {
  const double va = saa - ma * ma;
  const double vb = sbb - mb * mb;
  const double cov = sab - ma * mb;
  return ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
         ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
}

void check_ssim_input(std::size_t a, std::size_t b, int width, int height) {
  if (a != b || a != static_cast<std::size_t>(width) * height)
    throw Error(ErrorCode::DimensionMismatch, "ssim planes differ in size");
  if (width < kWin || height < kWin)
    throw Error(ErrorCode::ImageTooSmall, "ssim needs at least 11x11");
}

void check_conv(std::size_t in, std::size_t w, std::size_t b, std::size_t out,
                const ConvShape& s) {
  const std::size_t plane = static_cast<std::size_t>(s.height) * s.width;
  if (in != plane * s.in_channels || out != plane * s.out_channels ||
      b != static_cast<std::size_t>(s.out_channels) ||
      w != static_cast<std::size_t>(s.out_channels) * s.in_channels * s.kernel_h * s.kernel_w)
    throw Error(ErrorCode::GraphEvalError, "conv2d buffer sizes inconsistent with shape");
}

// One output sample, shared by both conv versions so accumulation order is fixed.
inline double conv_at(const double* in, const float* w, float bias, const ConvShape& s,
                      int r, int c) {
  const int pad_top = (s.kernel_h - 1) / 2;
  const int pad_left = (s.kernel_w - 1) / 2;
  const std::size_t plane = static_cast<std::size_t>(s.height) * s.width;
  double acc = bias;
  for (int ic = 0; ic < s.in_channels; ++ic) {
    const double* chan = in + ic * plane;
    const float* wk = w + static_cast<std::size_t>(ic) * s.kernel_h * s.kernel_w;
    for (int kr = 0; kr < s.kernel_h; ++kr) {
      const int rr = r + kr - pad_top;
      if (rr < 0 || rr >= s.height) continue;
      const double* row = chan + static_cast<std::size_t>(rr) * s.width;
      const float* wrow = wk + kr * s.kernel_w;
      for (int kc = 0; kc < s.kernel_w; ++kc) {
        const int cc = c + kc - pad_left;
        if (cc < 0 || cc >= s.width) continue;
        acc += static_cast<double>(wrow[kc]) * row[cc];
      }
    }
  }
  return acc;
}

}  // namespace

void local_mean(std::span<const std::uint8_t> src, int width, int height, Side query,
                std::span<std::uint8_t> dst) {
  check_plane(src.size(), dst.size(), width, height);
  const std::uint8_t* s = src.data();
  std::uint8_t* d = dst.data();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      d[i] = side_of(r, c) == query ? local_mean_at(s, width, height, r, c) : s[i];
    }
  }
}

void local_mean_reference(std::span<const std::uint8_t> src, int width, int height,
                          Side query, std::span<std::uint8_t> dst) {
  check_plane(src.size(), dst.size(), width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      if (side_of(r, c) != query) {
        dst[i] = src[i];
        continue;
      }
      int sum = 0, n = 0;
      const int dr[] = {-1, 1, 0, 0};
      const int dc[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
        sum += src[static_cast<std::size_t>(rr) * width + cc];
        ++n;
      }
      dst[i] = static_cast<std::uint8_t>(std::lround(static_cast<double>(sum) / n));
    }
  }
}

void conv2d_same(std::span<const double> input, std::span<const float> weights,
                 std::span<const float> biases, const ConvShape& s, std::span<double> output) {
  check_conv(input.size(), weights.size(), biases.size(), output.size(), s);
  const std::size_t plane = static_cast<std::size_t>(s.height) * s.width;
  const std::size_t per_out = static_cast<std::size_t>(s.in_channels) * s.kernel_h * s.kernel_w;
  const int rows = s.out_channels * s.height;
#pragma omp parallel for schedule(static)
  for (int job = 0; job < rows; ++job) {
    const int oc = job / s.height;
    const int r = job % s.height;
    const float* w = weights.data() + oc * per_out;
    double* out = output.data() + oc * plane + static_cast<std::size_t>(r) * s.width;
    for (int c = 0; c < s.width; ++c)
      out[c] = conv_at(input.data(), w, biases[oc], s, r, c);
  }
}

void conv2d_same_reference(std::span<const double> input, std::span<const float> weights,
                           std::span<const float> biases, const ConvShape& s,
                           std::span<double> output) {
  check_conv(input.size(), weights.size(), biases.size(), output.size(), s);
  const std::size_t plane = static_cast<std::size_t>(s.height) * s.width;
  const std::size_t per_out = static_cast<std::size_t>(s.in_channels) * s.kernel_h * s.kernel_w;
  for (int oc = 0; oc < s.out_channels; ++oc)
    for (int r = 0; r < s.height; ++r)
      for (int c = 0; c < s.width; ++c)
        output[oc * plane + static_cast<std::size_t>(r) * s.width + c] =
            conv_at(input.data(), weights.data() + oc * per_out, biases[oc], s, r, c);
}

double ssim_mean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, int width,
                 int height) {
  check_ssim_input(a.size(), b.size(), width, height);
  const auto g = gaussian_taps();
  const int ow = width - kWin + 1;
  const int oh = height - kWin + 1;
  const std::size_t hsize = static_cast<std::size_t>(height) * ow;
  // Horizontal pass: five moment maps, height x ow.
  std::vector<double> ha(hsize), hb(hsize), haa(hsize), hbb(hsize), hab(hsize);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < height; ++r) {
    const std::uint8_t* ra = a.data() + static_cast<std::size_t>(r) * width;
    const std::uint8_t* rb = b.data() + static_cast<std::size_t>(r) * width;
    for (int c = 0; c < ow; ++c) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (int k = 0; k < kWin; ++k) {
        const double va = ra[c + k], vb = rb[c + k];
        sa += g[k] * va;
        sb += g[k] * vb;
        saa += g[k] * va * va;
        sbb += g[k] * vb * vb;
        sab += g[k] * va * vb;
      }
      const std::size_t i = static_cast<std::size_t>(r) * ow + c;
      ha[i] = sa; hb[i] = sb; haa[i] = saa; hbb[i] = sbb; hab[i] = sab;
    }
  }
  std::vector<double> row_sums(oh, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < oh; ++r) {
    double acc = 0;
    for (int c = 0; c < ow; ++c) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int k = 0; k < kWin; ++k) {
        const std::size_t i = static_cast<std::size_t>(r + k) * ow + c;
        ma += g[k] * ha[i];
        mb += g[k] * hb[i];
        saa += g[k] * haa[i];
        sbb += g[k] * hbb[i];
        sab += g[k] * hab[i];
      }
      acc += ssim_from_moments(ma, mb, saa, sbb, sab);
    }
    row_sums[r] = acc;
  }
  double total = 0;
  for (double v : row_sums) total += v;
  return total / (static_cast<double>(ow) * oh);
}

double ssim_mean_reference(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                           int width, int height) {
  check_ssim_input(a.size(), b.size(), width, height);
  const auto g = gaussian_taps();
  const int ow = width - kWin + 1;
  const int oh = height - kWin + 1;
  double total = 0;
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < kWin; ++i) {
        for (int j = 0; j < kWin; ++j) {
          const double w = g[i] * g[j];
          const std::size_t idx = static_cast<std::size_t>(r + i) * width + (c + j);
          const double va = a[idx], vb = b[idx];
          ma += w * va;
          mb += w * vb;
          saa += w * va * va;
          sbb += w * vb * vb;
          sab += w * va * vb;
        }
      }
      total += ssim_from_moments(ma, mb, saa, sbb, sab);
    }
  }
  return total / (static_cast<double>(ow) * oh);
}

std::uint64_t squared_error(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "planes differ in size");
  const long long n = static_cast<long long>(a.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (long long i = 0; i < n; ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    total += static_cast<std::uint64_t>(d * d);
  }
  return total;
}

std::uint64_t squared_error_reference(std::span<const std::uint8_t> a,
                                      std::span<const std::uint8_t> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "planes differ in size");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    total += static_cast<std::uint64_t>(d * d);
  }
  return total;
}

int configure_threads_from_env() {
#ifdef _OPENMP
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("PEM_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) cap = std::min(cap, requested);
  }
  omp_set_num_threads(cap);
  return cap;
#else
  return 1;
#endif
}

}  // namespace pem::kernels
