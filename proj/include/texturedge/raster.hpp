#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace texturedge {

/// Row-major single-channel raster. The pixel carrier for every stage.
template <class T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::size_t size() const noexcept { return data.size(); }
  bool empty() const noexcept { return data.empty(); }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }

  T& at(int x, int y) noexcept { return data[index(x, y)]; }
  const T& at(int x, int y) const noexcept { return data[index(x, y)]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }

  bool same_shape(const auto& other) const noexcept {
    return width == other.width && height == other.height;
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// 8-bit intensity image, values in [0,255].
using GrayImage = Raster<std::uint8_t>;

/// Real-valued per-pixel descriptor raster.
using TextureMap = Raster<double>;

/// Per-pixel boolean raster. Stored as bytes (0/1) so rows are addressable.
using BinaryMask = Raster<std::uint8_t>;

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Selects the parallel OpenMP path or the serial reference path of a kernel.
/// Both produce bit-identical results.
enum class Execution { Serial, Parallel };

}  // namespace texturedge
