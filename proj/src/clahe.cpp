#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "texturedge/enhance.hpp"
#include "texturedge/error.hpp"

namespace texturedge {

namespace {

struct TileAxis {
  std::vector<int> start;  // tile k covers [start[k], start[k+1])
  std::vector<double> center;
};

TileAxis split_axis(int length, int tiles) {
  TileAxis axis;
  const int step = length / tiles;
  for (int k = 0; k < tiles; ++k) axis.start.push_back(k * step);
  axis.start.push_back(length);  // remainder goes to the last tile
  for (int k = 0; k < tiles; ++k) axis.center.push_back((axis.start[k] + axis.start[k + 1] - 1) / 2.0);
  return axis;
}

// Index of the lower interpolation tile and the weight of the upper one.
struct Interp {
  int lo = 0;
  int hi = 0;
  double weight = 0.0;
};

std::vector<Interp> interpolation_table(int length, const TileAxis& axis) {
  const int tiles = static_cast<int>(axis.center.size());
  std::vector<Interp> table(static_cast<std::size_t>(length));
  int k = 0;
  for (int p = 0; p < length; ++p) {
    if (p <= axis.center.front()) {
      table[p] = {0, 0, 0.0};
      continue;
    }
    if (p >= axis.center.back()) {
      table[p] = {tiles - 1, tiles - 1, 0.0};
      continue;
    }
    while (k + 1 < tiles && axis.center[k + 1] <= p) ++k;
    const double span = axis.center[k + 1] - axis.center[k];
    table[p] = {k, k + 1, (p - axis.center[k]) / span};
  }
  return table;
}

std::vector<double> tile_mapping(const GrayImage& img, int x0, int x1, int y0, int y1,
                                 const ClaheParams& params) {
  const int bins = params.bins;
  std::vector<long> hist(static_cast<std::size_t>(bins), 0);
  long pixels = 0;
  long value_sum = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const int v = img.at(x, y);
      ++hist[static_cast<std::size_t>(v * bins / 256)];
      value_sum += v;
      ++pixels;
    }
  }

  std::vector<double> lut(static_cast<std::size_t>(bins), 0.0);
  const auto occupied = std::count_if(hist.begin(), hist.end(), [](long c) { return c > 0; });
  if (occupied == 1) {
    // Single spike: map the tile's value to itself. Other bins (seen only
    // through interpolation from neighbouring tiles) map to their own level.
    for (int b = 0; b < bins; ++b) lut[static_cast<std::size_t>(b)] = std::floor(b * 256.0 / bins);
    const auto spike = std::find_if(hist.begin(), hist.end(), [](long c) { return c > 0; }) - hist.begin();
    lut[static_cast<std::size_t>(spike)] = std::floor(static_cast<double>(value_sum) / pixels + 0.5);
    return lut;
  }

  const long clip = std::max(1L, static_cast<long>(params.clip_limit * pixels / bins));
  long excess = 0;
  for (auto& c : hist) {
    if (c > clip) {
      excess += c - clip;
      c = clip;
    }
  }
  const long increment = excess / bins;  // one uniform pass; residual is dropped
  long total = 0;
  for (auto& c : hist) {
    c += increment;
    total += c;
  }

  long cdf = 0;
  for (int b = 0; b < bins; ++b) {
    cdf += hist[static_cast<std::size_t>(b)];
    lut[static_cast<std::size_t>(b)] = std::floor(static_cast<double>(cdf) * 255.0 / total + 0.5);
  }
  return lut;
}

}  // namespace

GrayImage clahe(const GrayImage& img, const ClaheParams& params, Execution exec) {
  if (!(params.clip_limit > 0.0)) throw Error(ErrorCode::InvalidConfig, "clip_limit must be > 0");
  if (params.bins < 2 || params.bins > 256) throw Error(ErrorCode::InvalidConfig, "bins must lie in [2, 256]");
  if (params.tiles_x < 1 || params.tiles_y < 1) throw Error(ErrorCode::InvalidConfig, "tile counts must be >= 1");
  if (params.tiles_x > img.width || params.tiles_y > img.height) {
    throw Error(ErrorCode::TilesTooMany, std::to_string(params.tiles_x) + "x" + std::to_string(params.tiles_y) +
                                             " tiles on " + std::to_string(img.width) + "x" +
                                             std::to_string(img.height) + " image");
  }

  const auto ax = split_axis(img.width, params.tiles_x);
  const auto ay = split_axis(img.height, params.tiles_y);
  const bool parallel = exec == Execution::Parallel;

  std::vector<std::vector<double>> maps(static_cast<std::size_t>(params.tiles_x * params.tiles_y));
#pragma omp parallel for schedule(static) if (parallel)
  for (int t = 0; t < params.tiles_x * params.tiles_y; ++t) {
    const int tx = t % params.tiles_x;
    const int ty = t / params.tiles_x;
    maps[static_cast<std::size_t>(t)] =
        tile_mapping(img, ax.start[tx], ax.start[tx + 1], ay.start[ty], ay.start[ty + 1], params);
  }

  const auto ix = interpolation_table(img.width, ax);
  const auto iy = interpolation_table(img.height, ay);
  GrayImage out(img.width, img.height);
#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < img.height; ++y) {
    const auto& ry = iy[static_cast<std::size_t>(y)];
    for (int x = 0; x < img.width; ++x) {
      const auto& rx = ix[static_cast<std::size_t>(x)];
      const auto bin = static_cast<std::size_t>(img.at(x, y) * params.bins / 256);
      const auto lut = [&](int tx, int ty) { return maps[static_cast<std::size_t>(ty * params.tiles_x + tx)][bin]; };
      const double top = (1.0 - rx.weight) * lut(rx.lo, ry.lo) + rx.weight * lut(rx.hi, ry.lo);
      const double bottom = (1.0 - rx.weight) * lut(rx.lo, ry.hi) + rx.weight * lut(rx.hi, ry.hi);
      const double v = std::floor((1.0 - ry.weight) * top + ry.weight * bottom + 0.5);
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return out;
}

}  // namespace texturedge
