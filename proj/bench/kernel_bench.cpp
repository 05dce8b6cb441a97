// Naive vs sliding texture kernels, and the sliding kernel serial vs OpenMP.

#include <benchmark/benchmark.h>

#include <random>

#include "texturedge/enhance.hpp"
#include "texturedge/texture.hpp"

namespace {

using namespace texturedge;

QuantizedImage random_image(int size, int levels) {
  std::mt19937 rng(42u + static_cast<unsigned>(size));
  std::uniform_int_distribution<int> dist(0, 255);
  GrayImage img(size, size);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(dist(rng));
  return quantize(img, levels);
}

void BM_TextureNaive(benchmark::State& state) {
  const auto q = random_image(static_cast<int>(state.range(0)), 8);
  const TextureParams p{Descriptor::Contrast, static_cast<int>(state.range(1)), {1, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(texture_map_naive(q, p));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_TextureSlidingSerial(benchmark::State& state) {
  const auto q = random_image(static_cast<int>(state.range(0)), 8);
  const TextureParams p{Descriptor::Contrast, static_cast<int>(state.range(1)), {1, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(texture_map_sliding(q, p, Execution::Serial));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_TextureSlidingParallel(benchmark::State& state) {
  const auto q = random_image(static_cast<int>(state.range(0)), 8);
  const TextureParams p{Descriptor::Contrast, static_cast<int>(state.range(1)), {1, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(texture_map_sliding(q, p, Execution::Parallel));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_Srad(benchmark::State& state) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(60, 200);
  GrayImage img(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto& v : img.data) v = static_cast<std::uint8_t>(dist(rng));
  SradParams p;
  p.iterations = 10;
  const auto exec = state.range(1) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(srad(img, p, exec));
}

void KernelArgs(benchmark::internal::Benchmark* b) {
  for (int size : {64, 128, 256}) {
    for (int window : {3, 7, 9}) b->Args({size, window});
  }
}

BENCHMARK(BM_TextureNaive)->Apply(KernelArgs)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TextureSlidingSerial)->Apply(KernelArgs)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TextureSlidingParallel)->Apply(KernelArgs)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Srad)->Args({512, 0})->Args({512, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
