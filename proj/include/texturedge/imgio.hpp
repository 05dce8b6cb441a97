#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "texturedge/raster.hpp"

namespace texturedge {

// ---------------------------------------------------------------------------
// Netpbm PGM (P5 binary, P2 ASCII), 8-bit only.
// ---------------------------------------------------------------------------

/// Decodes a P5 or P2 stream. Header comments ("#" to end of line) are
/// accepted anywhere between header tokens. Samples are returned as encoded;
/// no rescaling is applied when maxval < 255.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Canonical P5 encoding with maxval 255.
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---------------------------------------------------------------------------
// mini-MIAS annotation index
// ---------------------------------------------------------------------------

enum class Tissue { Fatty, Glandular, Dense };
enum class Abnormality { Calc, Circ, Spic, Misc, Arch, Asym, Norm };
enum class Severity { Benign, Malignant };

struct MiasRecord {
  std::string ref_id;
  Tissue tissue = Tissue::Fatty;
  Abnormality abnormality = Abnormality::Norm;
  std::optional<Severity> severity;
  // Geometry in the index file's own bottom-left-origin coordinates.
  std::optional<int> center_x;
  std::optional<int> center_y;
  std::optional<int> radius;

  bool has_geometry() const noexcept { return center_x && center_y && radius; }

  friend bool operator==(const MiasRecord&, const MiasRecord&) = default;
};

char tissue_code(Tissue t) noexcept;
std::string_view abnormality_code(Abnormality a) noexcept;

/// Parses `ref tissue abnorm [severity [x y radius]]` lines. Blank lines are
/// skipped. Tokens after the geometry are accepted only when they start an
/// annotation note ("*..."). Any other malformed line fails the whole parse
/// with MalformedLine naming the 1-based line number.
std::vector<MiasRecord> parse_mias_index(std::string_view text);

/// Reads an info file from the dataset and keeps only the record table rows
/// (lines whose first token looks like `mdbNNN`); the rows are then parsed
/// strictly with parse_mias_index.
std::vector<MiasRecord> load_mias_index(const std::filesystem::path& path);

/// Converts an index-file (bottom-left origin) coordinate to image (top-left).
Point mias_to_image(int x, int y, int image_height) noexcept;

// ---------------------------------------------------------------------------
// ROI extraction
// ---------------------------------------------------------------------------

struct RoiSpec {
  int center_x = 0;  // image coordinates, top-left origin
  int center_y = 0;
  int radius = 1;
  double margin_factor = 1.5;
};

struct Roi {
  GrayImage image;
  Rect box;  // crop rectangle in full-image coordinates
};

/// Square crop of side round(2 * radius * margin_factor) centered on the
/// ROI center, clamped to the image bounds.
Roi extract_roi(const GrayImage& img, const RoiSpec& roi);

/// Crop box computed by extract_roi, without copying pixels.
Rect roi_box(int image_width, int image_height, const RoiSpec& roi);

template <class T>
Raster<T> crop(const Raster<T>& src, const Rect& box) {
  Raster<T> out(box.width, box.height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) out.at(x, y) = src.at(box.x + x, box.y + y);
  }
  return out;
}

}  // namespace texturedge
