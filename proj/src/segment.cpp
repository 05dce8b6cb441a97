#include "texturedge/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

#include "texturedge/error.hpp"

namespace texturedge {

double otsu_threshold(const TextureMap& map) {
  if (map.empty()) throw Error(ErrorCode::DegenerateMap, "empty map");
  const auto [lo_it, hi_it] = std::minmax_element(map.data.begin(), map.data.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) throw Error(ErrorCode::DegenerateMap, "map has a single value");

  constexpr int kBins = 256;
  std::array<double, kBins> hist{};
  for (double v : map.data) {
    const int bin = std::min(kBins - 1, static_cast<int>((v - lo) / range * kBins));
    hist[static_cast<std::size_t>(bin)] += 1.0;
  }
  double total = 0.0;
  double total_mass = 0.0;
  for (int b = 0; b < kBins; ++b) {
    total += hist[b];
    total_mass += b * hist[b];
  }

  int best = -1;
  double best_var = -1.0;
  double w0 = 0.0;
  double m0 = 0.0;
  for (int k = 0; k < kBins - 1; ++k) {
    w0 += hist[k];
    m0 += k * hist[k];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = m0 / w0;
    const double mu1 = (total_mass - m0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best_var) {
      best_var = between;
      best = k;
    }
  }
  if (best < 0) throw Error(ErrorCode::InvariantViolation, "no Otsu split on a non-constant map");
  return lo + (best + 1) / static_cast<double>(kBins) * range;
}

double percentile_threshold(const TextureMap& map, double percentile) {
  if (map.empty()) throw Error(ErrorCode::DegenerateMap, "empty map");
  if (!(percentile >= 0.0 && percentile <= 100.0)) {
    throw Error(ErrorCode::InvalidConfig, "percentile must lie in [0, 100]");
  }
  auto sorted = map.data;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const auto rank = static_cast<long>(std::ceil(percentile / 100.0 * n)) - 1;
  return sorted[static_cast<std::size_t>(std::clamp(rank, 0L, static_cast<long>(sorted.size()) - 1))];
}

BinaryMask binarize(const TextureMap& map, double t) {
  BinaryMask out(map.width, map.height);
  for (std::size_t i = 0; i < map.size(); ++i) out.data[i] = map.data[i] >= t ? 1 : 0;
  return out;
}

std::vector<Point> disk_offsets(int radius) {
  std::vector<Point> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    }
  }
  return offsets;
}

namespace {

// Output bit = any (dilate) / all (erode) of the disk-shifted input bits.
BinaryMask morph(const BinaryMask& mask, int radius, bool is_dilate) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool result = !is_dilate;
      for (const auto& o : offsets) {
        const int sx = x + o.x;
        const int sy = y + o.y;
        const bool bit = mask.contains(sx, sy) ? mask.at(sx, sy) != 0 : !is_dilate;
        if (is_dilate && bit) {
          result = true;
          break;
        }
        if (!is_dilate && !bit) {
          result = false;
          break;
        }
      }
      out.at(x, y) = result ? 1 : 0;
    }
  }
  return out;
}

constexpr std::array<Point, 4> kNeighbors4 = {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}};
constexpr std::array<Point, 8> kNeighbors8 = {Point{1, 0},  Point{1, 1},   Point{0, 1},  Point{-1, 1},
                                              Point{-1, 0}, Point{-1, -1}, Point{0, -1}, Point{1, -1}};

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) { return morph(mask, radius, true); }
BinaryMask erode(const BinaryMask& mask, int radius) { return morph(mask, radius, false); }
BinaryMask close(const BinaryMask& mask, int radius) { return erode(dilate(mask, radius), radius); }

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  BinaryMask outside(w, h);
  std::deque<Point> queue;
  const auto seed = [&](int x, int y) {
    if (!mask.at(x, y) && !outside.at(x, y)) {
      outside.at(x, y) = 1;
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (const auto& d : kNeighbors4) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (mask.contains(nx, ny)) seed(nx, ny);
    }
  }
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = outside.data[i] ? 0 : 1;
  return out;
}

int label_components(const BinaryMask& mask, std::vector<int>& labels) {
  labels.assign(mask.size(), 0);
  int next = 0;
  std::deque<Point> queue;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || labels[mask.index(x, y)]) continue;
      ++next;
      labels[mask.index(x, y)] = next;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const auto p = queue.front();
        queue.pop_front();
        for (const auto& d : kNeighbors8) {
          const int nx = p.x + d.x;
          const int ny = p.y + d.y;
          if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
          auto& l = labels[mask.index(nx, ny)];
          if (l == 0) {
            l = next;
            queue.push_back({nx, ny});
          }
        }
      }
    }
  }
  return next;
}

BinaryMask refine_mask(const BinaryMask& mask, Point center, int close_radius, bool fill) {
  auto work = close(mask, close_radius);
  if (fill) work = fill_holes(work);

  std::vector<int> labels;
  const int count = label_components(work, labels);
  BinaryMask out(mask.width, mask.height);
  if (count == 0) return out;

  std::vector<double> sx(static_cast<std::size_t>(count) + 1, 0.0);
  std::vector<double> sy(sx.size(), 0.0);
  std::vector<double> n(sx.size(), 0.0);
  for (int y = 0; y < work.height; ++y) {
    for (int x = 0; x < work.width; ++x) {
      const auto l = static_cast<std::size_t>(labels[work.index(x, y)]);
      if (l == 0) continue;
      sx[l] += x;
      sy[l] += y;
      n[l] += 1.0;
    }
  }
  int keep = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= count; ++l) {
    const double dx = sx[l] / n[l] - center.x;
    const double dy = sy[l] / n[l] - center.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) {
      best = d2;
      keep = l;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = labels[i] == keep ? 1 : 0;
  return out;
}

BinaryMask mask_boundary(const BinaryMask& mask) {
  BinaryMask out(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      for (const auto& d : kNeighbors4) {
        const int nx = x + d.x;
        const int ny = y + d.y;
        if (!mask.contains(nx, ny) || !mask.at(nx, ny)) {
          out.at(x, y) = 1;
          break;
        }
      }
    }
  }
  return out;
}

GrayImage overlay_boundary(const GrayImage& image, const BinaryMask& mask) {
  if (!image.same_shape(mask)) throw Error(ErrorCode::DimensionMismatch, "overlay mask size");
  GrayImage out = image;
  const auto edge = mask_boundary(mask);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (edge.data[i]) out.data[i] = 255;
  }
  return out;
}

GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage out(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.size(); ++i) out.data[i] = mask.data[i] ? 255 : 0;
  return out;
}

BinaryMask gray_to_mask(const GrayImage& img) {
  BinaryMask out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) out.data[i] = img.data[i] ? 1 : 0;
  return out;
}

std::string format_contours(const std::vector<Contour>& contours) {
  std::string text;
  for (const auto& c : contours) {
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      if (i) text += ' ';
      text += std::to_string(c.vertices[i].x) + "," + std::to_string(c.vertices[i].y);
    }
    text += '\n';
  }
  return text;
}

}  // namespace texturedge
