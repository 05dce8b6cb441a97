#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>
#include <vector>

#include "texture_detail.hpp"
#include "texturedge/error.hpp"
#include "texturedge/texture.hpp"

namespace texturedge {

namespace {

void validate(const QuantizedImage& q, const TextureParams& params) {
  if (q.levels < 2 || q.levels > 256) throw Error(ErrorCode::LevelsOutOfRange, "quantized image levels");
  if (params.window_side < 3 || params.window_side % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "window_side must be odd and >= 3");
  }
  if (params.offset.dx == 0 && params.offset.dy == 0) throw Error(ErrorCode::InvalidConfig, "offset (0,0)");
  if (q.width < 1 || q.height < 1) throw Error(ErrorCode::EmptyRegion, "empty image");
  const int half = params.window_side / 2;
  if (half > std::min(q.width, q.height)) {
    throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(params.window_side) + " needs " +
                                               std::to_string(half) + " px of reflection on a " +
                                               std::to_string(q.width) + "x" + std::to_string(q.height) +
                                               " image");
  }
}

QuantizedImage reflect_pad(const QuantizedImage& q, int pad) {
  QuantizedImage out{q.width + 2 * pad, q.height + 2 * pad, q.levels, {}};
  out.values.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    const int sy = detail::reflect(y - pad, q.height);
    for (int x = 0; x < out.width; ++x) {
      out.values[static_cast<std::size_t>(y) * out.width + x] = q.at(detail::reflect(x - pad, q.width), sy);
    }
  }
  return out;
}

// Running co-occurrence histogram for one output row of the sliding kernel.
class PairHistogram {
 public:
  PairHistogram(const QuantizedImage& padded, const TextureParams& params, int top)
      : img_(padded),
        levels_(padded.levels),
        side_(params.window_side),
        off_(params.offset),
        symmetric_(params.symmetric),
        counts_(static_cast<std::size_t>(levels_) * levels_, 0),
        occupied_((counts_.size() + 63) / 64, 0),
        row_begin_(std::max(top, top - off_.dy)),
        row_end_(std::min(top + side_, top + side_ - off_.dy)) {}

  // Tallies the full window whose left column is `left`.
  void seed(int left) {
    for (int c = left; c < left + side_; ++c) {
      const int c2 = c + off_.dx;
      if (c2 < left || c2 >= left + side_) continue;
      tally_column(c, +1);
    }
  }

  // Moves the window from [left-1, left-1+side) to [left, left+side).
  void slide_to(int left) {
    const int adx = std::abs(off_.dx);
    const int gone = left - 1;
    tally_column(off_.dx >= 0 ? gone : gone + adx, -1);
    const int fresh = left + side_ - 1;
    tally_column(off_.dx >= 0 ? fresh - off_.dx : fresh, +1);
  }

  // Visits occupied cells in row-major order; same sum as descriptor().
  double value(Descriptor kind) const {
    if (pairs_ == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t w = 0; w < occupied_.size(); ++w) {
      for (std::uint64_t bits = occupied_[w]; bits != 0; bits &= bits - 1) {
        const auto cell = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        const int i = static_cast<int>(cell / static_cast<std::size_t>(levels_));
        const int j = static_cast<int>(cell % static_cast<std::size_t>(levels_));
        acc += detail::term(kind, i, j, detail::probability(counts_[cell], pairs_));
      }
    }
    return acc;
  }

 private:
  // Adds or removes every pair whose first endpoint sits in column `c`.
  void tally_column(int c, int sign) {
    const int c2 = c + off_.dx;
    for (int r = row_begin_; r < row_end_; ++r) {
      const int a = img_.at(c, r);
      const int b = img_.at(c2, r + off_.dy);
      bump(a, b, sign);
      if (symmetric_) bump(b, a, sign);
    }
  }

  void bump(int a, int b, int sign) {
    const auto k = static_cast<std::size_t>(a) * levels_ + b;
    auto& cell = counts_[k];
    if (sign > 0) {
      if (cell++ == 0) occupied_[k / 64] |= std::uint64_t{1} << (k % 64);
      ++pairs_;
    } else {
      if (--cell == 0) occupied_[k / 64] &= ~(std::uint64_t{1} << (k % 64));
      --pairs_;
    }
  }

  const QuantizedImage& img_;
  int levels_;
  int side_;
  Offset off_;
  bool symmetric_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> occupied_;  // bit k set iff counts_[k] > 0
  std::uint64_t pairs_ = 0;
  int row_begin_;
  int row_end_;
};

}  // namespace

TextureMap texture_map_naive(const QuantizedImage& q, const TextureParams& params) {
  validate(q, params);
  const int side = params.window_side;
  const auto padded = reflect_pad(q, side / 2);
  TextureMap out(q.width, q.height);
  for (int y = 0; y < q.height; ++y) {
    for (int x = 0; x < q.width; ++x) {
      const auto g = glcm_window(padded, Rect{x, y, side, side}, params.offset, params.symmetric);
      out.at(x, y) = descriptor(g, params.kind);
    }
  }
  return out;
}

TextureMap texture_map_sliding(const QuantizedImage& q, const TextureParams& params, Execution exec) {
  validate(q, params);
  const int side = params.window_side;
  TextureMap out(q.width, q.height);
  // Displacements spanning the whole window leave no pair inside it.
  if (std::abs(params.offset.dx) >= side || std::abs(params.offset.dy) >= side) return out;

  const auto padded = reflect_pad(q, side / 2);
  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < q.height; ++y) {
    PairHistogram hist(padded, params, y);
    hist.seed(0);
    out.at(0, y) = hist.value(params.kind);
    for (int x = 1; x < q.width; ++x) {
      hist.slide_to(x);
      out.at(x, y) = hist.value(params.kind);
    }
  }
  return out;
}

TextureMap directional_sum(std::span<const TextureMap> maps) {
  if (maps.size() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "directional_sum needs exactly 4 maps, got " +
                                                  std::to_string(maps.size()));
  }
  for (const auto& m : maps) {
    if (!m.same_shape(maps[0])) throw Error(ErrorCode::DimensionMismatch, "directional maps differ in size");
  }
  TextureMap out = maps[0];
  for (std::size_t k = 1; k < maps.size(); ++k) {
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += maps[k].data[i];
  }
  return out;
}

DirectionalMaps directional_maps(const QuantizedImage& q, Descriptor kind, int window_side, int distance,
                                 bool symmetric, Execution exec) {
  DirectionalMaps result;
  const auto offsets = standard_offsets(distance);
  for (std::size_t d = 0; d < offsets.size(); ++d) {
    result.per_direction[d] = texture_map_sliding(q, {kind, window_side, offsets[d], symmetric}, exec);
  }
  result.sum = directional_sum(result.per_direction);
  return result;
}

}  // namespace texturedge
