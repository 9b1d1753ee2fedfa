#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pem/codec.hpp"
#include "pem/kernels.hpp"
#include "pem/metrics.hpp"

namespace k = pem::kernels;

namespace {

std::vector<std::uint8_t> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = static_cast<std::uint8_t>(rng() & 0xFF);
  return v;
}

struct ConvCase {
  k::ConvShape shape;
  std::vector<double> in, out;
  std::vector<float> w, b;

  explicit ConvCase(int size) : shape{8, 8, 3, 3, size, size} {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    in.resize(static_cast<std::size_t>(shape.in_channels) * size * size);
    for (auto& v : in) v = u(rng);
    w.resize(static_cast<std::size_t>(shape.out_channels) * shape.in_channels * 9);
    for (auto& v : w) v = u(rng);
    b.resize(shape.out_channels);
    for (auto& v : b) v = u(rng);
    out.resize(static_cast<std::size_t>(shape.out_channels) * size * size);
  }
};

void BM_Conv2d(benchmark::State& state) {
  ConvCase c(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    k::conv2d_same(c.in, c.w, c.b, c.shape, c.out);
    benchmark::DoNotOptimize(c.out.data());
  }
}

void BM_Conv2dReference(benchmark::State& state) {
  ConvCase c(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    k::conv2d_same_reference(c.in, c.w, c.b, c.shape, c.out);
    benchmark::DoNotOptimize(c.out.data());
  }
}

void BM_LocalMean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto src = noise(static_cast<std::size_t>(n) * n, 2);
  std::vector<std::uint8_t> dst(src.size());
  for (auto _ : state) {
    k::local_mean(src, n, n, pem::Side::White, dst);
    benchmark::DoNotOptimize(dst.data());
  }
}

void BM_LocalMeanReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto src = noise(static_cast<std::size_t>(n) * n, 2);
  std::vector<std::uint8_t> dst(src.size());
  for (auto _ : state) {
    k::local_mean_reference(src, n, n, pem::Side::White, dst);
    benchmark::DoNotOptimize(dst.data());
  }
}

void BM_Ssim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = noise(static_cast<std::size_t>(n) * n, 3), b = noise(a.size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(k::ssim_mean(a, b, n, n));
}

void BM_SsimReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = noise(static_cast<std::size_t>(n) * n, 3), b = noise(a.size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(k::ssim_mean_reference(a, b, n, n));
}

void BM_EncodeDecodeLmi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::uint8_t> s(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s[static_cast<std::size_t>(r) * n + c] = static_cast<std::uint8_t>((r + c) / 4 % 256);
  const pem::PixelPlane cover(n, n, std::move(s));
  const auto params = pem::StegoParams::lmi(2);
  const auto m = pem::seeded_message(pem::estimate_capacity(cover, params) / 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pem::decode(pem::encode(cover, m, params), params));
}

}  // namespace

BENCHMARK(BM_Conv2d)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv2dReference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalMean)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LocalMeanReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Ssim)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SsimReference)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncodeDecodeLmi)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
