#include <cmath>
#include <string>

#include "texturedge/error.hpp"
#include "texturedge/texture.hpp"
#include "texture_detail.hpp"

namespace texturedge {

std::array<Offset, 4> standard_offsets(int distance) {
  if (distance < 1) throw Error(ErrorCode::InvalidConfig, "GLCM distance must be >= 1");
  return {Offset{distance, 0}, Offset{distance, -distance}, Offset{0, -distance},
          Offset{-distance, -distance}};
}

std::string_view descriptor_name(Descriptor kind) noexcept {
  switch (kind) {
    case Descriptor::Contrast: return "contrast";
    case Descriptor::Entropy: return "entropy";
    case Descriptor::Asm: return "asm";
    case Descriptor::Idm: return "idm";
  }
  return "?";
}

Descriptor parse_descriptor(std::string_view name) {
  for (auto k : {Descriptor::Contrast, Descriptor::Entropy, Descriptor::Asm, Descriptor::Idm}) {
    if (name == descriptor_name(k)) return k;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown descriptor '" + std::string(name) + "'");
}

QuantizedImage quantize(const GrayImage& img, int levels) {
  if (levels < 2 || levels > 256) {
    throw Error(ErrorCode::LevelsOutOfRange, "levels " + std::to_string(levels) + " outside [2, 256]");
  }
  QuantizedImage q{img.width, img.height, levels, std::vector<std::uint8_t>(img.size())};
  for (std::size_t i = 0; i < img.size(); ++i) {
    q.values[i] = static_cast<std::uint8_t>(img.data[i] * levels / 256);
  }
  return q;
}

Glcm glcm_window(const QuantizedImage& q, const Rect& region, Offset offset, bool symmetric) {
  if (offset.dx == 0 && offset.dy == 0) throw Error(ErrorCode::InvalidConfig, "offset (0,0)");
  if (region.width <= 0 || region.height <= 0) throw Error(ErrorCode::EmptyRegion, "empty GLCM region");
  if (region.x < 0 || region.y < 0 || region.x + region.width > q.width || region.y + region.height > q.height) {
    throw Error(ErrorCode::EmptyRegion, "GLCM region outside image");
  }
  const int levels = q.levels;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(levels) * levels, 0);
  std::uint64_t pairs = 0;
  const int x_end = region.x + region.width;
  const int y_end = region.y + region.height;
  for (int y = region.y; y < y_end; ++y) {
    const int y2 = y + offset.dy;
    if (y2 < region.y || y2 >= y_end) continue;
    for (int x = region.x; x < x_end; ++x) {
      const int x2 = x + offset.dx;
      if (x2 < region.x || x2 >= x_end) continue;
      const int a = q.at(x, y);
      const int b = q.at(x2, y2);
      ++counts[static_cast<std::size_t>(a) * levels + b];
      ++pairs;
      if (symmetric) {
        ++counts[static_cast<std::size_t>(b) * levels + a];
        ++pairs;
      }
    }
  }

  Glcm g{levels, std::vector<double>(counts.size(), 0.0), pairs};
  if (pairs > 0) {
    for (std::size_t k = 0; k < counts.size(); ++k) g.p[k] = detail::probability(counts[k], pairs);
  }
  return g;
}

double contrast(const Glcm& g) { return descriptor(g, Descriptor::Contrast); }

double descriptor(const Glcm& g, Descriptor kind) {
  if (g.pair_count == 0) return 0.0;
  return detail::evaluate(kind, g.levels, [&](std::size_t k) { return g.p[k]; });
}

double descriptor_from_counts(const std::uint32_t* counts, int levels, std::uint64_t pair_count,
                              Descriptor kind) {
  if (pair_count == 0) return 0.0;
  return detail::evaluate(kind, levels,
                          [&](std::size_t k) { return detail::probability(counts[k], pair_count); });
}

}  // namespace texturedge
