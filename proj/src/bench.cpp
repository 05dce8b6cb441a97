#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "texturedge/pipeline.hpp"

namespace texturedge {

namespace {

template <class Fn>
double median_ms(int repeats, Fn&& fn) {
  std::vector<double> samples;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<int>& sizes, const std::vector<int>& window_sides,
                                const std::vector<int>& levels, int repeats) {
  repeats = std::max(1, repeats);
  std::vector<BenchRow> rows;
  for (int size : sizes) {
    std::mt19937 rng(static_cast<std::uint32_t>(0x5eed + size));
    std::uniform_int_distribution<int> dist(0, 255);
    GrayImage img(size, size);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(dist(rng));

    for (int lv : levels) {
      const auto q = quantize(img, lv);
      for (int side : window_sides) {
        std::array<TextureMap, 4> naive;
        std::array<TextureMap, 4> sliding;
        const auto offsets = standard_offsets(1);
        BenchRow row{size, side, lv, 0.0, 0.0, true};
        row.naive_ms = median_ms(repeats, [&] {
          for (std::size_t d = 0; d < 4; ++d) naive[d] = texture_map_naive(q, {Descriptor::Contrast, side, offsets[d]});
        });
        row.sliding_ms = median_ms(repeats, [&] {
          for (std::size_t d = 0; d < 4; ++d) {
            sliding[d] = texture_map_sliding(q, {Descriptor::Contrast, side, offsets[d]});
          }
        });
        for (std::size_t d = 0; d < 4; ++d) row.equal = row.equal && naive[d] == sliding[d];
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string text = "size,window_side,levels,naive_ms,sliding_ms,speedup,equal\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.3f,%.2f,%s\n", r.size, r.window_side, r.levels, r.naive_ms,
                  r.sliding_ms, r.sliding_ms > 0.0 ? r.naive_ms / r.sliding_ms : 0.0, r.equal ? "true" : "false");
    text += buf;
  }
  return text;
}

}  // namespace texturedge
