#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "texturedge/raster.hpp"

namespace texturedge {

/// Gray levels in [0, levels-1] indexing the co-occurrence matrix.
struct QuantizedImage {
  int width = 0;
  int height = 0;
  int levels = 0;
  std::vector<std::uint8_t> values;

  std::uint8_t at(int x, int y) const noexcept {
    return values[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const QuantizedImage&, const QuantizedImage&) = default;
};

/// Pixel displacement between the two members of a co-occurring pair.
/// Image y grows downward.
struct Offset {
  int dx = 1;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// The 0, 45, 90 and 135 degree offsets at distance d:
/// (d,0), (d,-d), (0,-d), (-d,-d).
std::array<Offset, 4> standard_offsets(int distance = 1);
inline constexpr std::array<int, 4> kStandardAngles = {0, 45, 90, 135};

/// Normalised co-occurrence matrix p(i,j) for one offset.
struct Glcm {
  int levels = 0;
  std::vector<double> p;  // row-major levels x levels
  std::uint64_t pair_count = 0;

  double operator()(int i, int j) const noexcept {
    return p[static_cast<std::size_t>(i) * levels + j];
  }
};

enum class Descriptor { Contrast, Entropy, Asm, Idm };

std::string_view descriptor_name(Descriptor kind) noexcept;
Descriptor parse_descriptor(std::string_view name);

/// v -> floor(v * levels / 256).
QuantizedImage quantize(const GrayImage& img, int levels);

/// Tallies ordered pairs (q[x,y], q[x+dx,y+dy]) with both endpoints inside
/// `region`. With `symmetric` each pair is also tallied reversed.
Glcm glcm_window(const QuantizedImage& q, const Rect& region, Offset offset, bool symmetric = false);

/// sum (i-j)^2 p(i,j).
double contrast(const Glcm& g);

/// Contrast, entropy (log2, 0 log 0 = 0), angular second moment, or inverse
/// differential moment sum p / (1 + (i-j)^2).
double descriptor(const Glcm& g, Descriptor kind);

/// Evaluates a descriptor from raw pair counts. Bit-identical to
/// descriptor(glcm) for the Glcm normalised from the same counts.
double descriptor_from_counts(const std::uint32_t* counts, int levels, std::uint64_t pair_count,
                              Descriptor kind);

struct TextureParams {
  Descriptor kind = Descriptor::Contrast;
  int window_side = 7;  // odd, >= 3
  Offset offset{};
  bool symmetric = false;
};

/// Reference kernel: reflect-pads the image by window_side/2 and rebuilds
/// the GLCM of every window from scratch. Serial by construction.
TextureMap texture_map_naive(const QuantizedImage& q, const TextureParams& params);

/// Incremental kernel. Each output row keeps a running pair-count histogram
/// and slides it one column at a time (pairs leaving on the left are removed,
/// pairs entering on the right are added), so the per-pixel update costs
/// O(window_side). Rows are independent and run in parallel. Output equals
/// texture_map_naive bit for bit.
TextureMap texture_map_sliding(const QuantizedImage& q, const TextureParams& params,
                               Execution exec = Execution::Parallel);

/// Elementwise sum of the four directional maps.
TextureMap directional_sum(std::span<const TextureMap> maps);

struct DirectionalMaps {
  std::array<TextureMap, 4> per_direction;  // 0, 45, 90, 135 degrees
  TextureMap sum;
};

/// All four standard directions at `distance`, plus their sum.
DirectionalMaps directional_maps(const QuantizedImage& q, Descriptor kind, int window_side, int distance,
                                 bool symmetric, Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Binary raster: magic "TXMAPF64", uint32 width, uint32 height, then
/// width*height IEEE-754 doubles, all little-endian.
std::vector<std::uint8_t> encode_texture_map(const TextureMap& map);
TextureMap decode_texture_map(std::span<const std::uint8_t> bytes);

struct Normalized8 {
  GrayImage image;
  double min = 0.0;
  double max = 0.0;
};

/// Min-max scaling to [0,255] (round-half-up). A constant map becomes all 0.
Normalized8 normalize_to_gray(const TextureMap& map);

/// Writes `<stem>.pgm` (normalised) and `<stem>.pgm.scale.txt` (min/max).
void write_texture_pgm(const std::filesystem::path& pgm_path, const TextureMap& map);
void write_texture_f64(const std::filesystem::path& path, const TextureMap& map);
TextureMap read_texture_f64(const std::filesystem::path& path);

}  // namespace texturedge
