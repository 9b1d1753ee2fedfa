#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a plain serial `*_reference` twin kept for tests and benchmarks.

#include <cstdint>
#include <span>

#include "pem/imaging.hpp"

namespace pem::kernels {

// Rounded mean of in-bounds von Neumann neighbours at every `query` pixel;
// the other side is copied through. Half rounds away from zero.
void local_mean(std::span<const std::uint8_t> src, int width, int height, Side query,
                std::span<std::uint8_t> dst);
void local_mean_reference(std::span<const std::uint8_t> src, int width, int height,
                          Side query, std::span<std::uint8_t> dst);

struct ConvShape {
  int in_channels;
  int out_channels;
  int kernel_h;
  int kernel_w;
  int height;
  int width;
};

// Same-padded 2-D cross-correlation, CHW layout. Weights are
// [out][in][row][col]. Zero padding puts the odd extra row/col at the
// bottom/right for even kernels. Each output accumulates bias first, then in
// (in, row, col) order, so both versions are bit-identical.
void conv2d_same(std::span<const double> input, std::span<const float> weights,
                 std::span<const float> biases, const ConvShape& shape,
                 std::span<double> output);
void conv2d_same_reference(std::span<const double> input, std::span<const float> weights,
                           std::span<const float> biases, const ConvShape& shape,
                           std::span<double> output);

// Mean SSIM over all valid 11x11 windows (Gaussian sigma 1.5, K1 0.01, K2 0.03,
// L 255). The parallel version filters separably; the reference evaluates each
// window directly.
double ssim_mean(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                 int width, int height);
double ssim_mean_reference(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                           int width, int height);

// Sum of squared differences.
std::uint64_t squared_error(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::uint64_t squared_error_reference(std::span<const std::uint8_t> a,
                                      std::span<const std::uint8_t> b);

// Caps OpenMP threads from PEM_THREADS when set; returns the effective cap.
int configure_threads_from_env();

}  // namespace pem::kernels
