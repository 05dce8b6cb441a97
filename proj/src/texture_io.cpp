#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "texturedge/error.hpp"
#include "texturedge/imgio.hpp"
#include "texturedge/texture.hpp"

namespace texturedge {

namespace {

constexpr char kMagic[8] = {'T', 'X', 'M', 'A', 'P', 'F', '6', '4'};
constexpr std::size_t kHeaderSize = sizeof(kMagic) + 8;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_texture_map(const TextureMap& map) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kHeaderSize + 8 * map.size());
  put_le(out, static_cast<std::uint32_t>(map.width), 4);
  put_le(out, static_cast<std::uint32_t>(map.height), 4);
  for (double v : map.data) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

TextureMap decode_texture_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::BadMagic, "not a TXMAPF64 texture map");
  }
  if (bytes.size() < kHeaderSize) throw Error(ErrorCode::TruncatedData, "texture map header");
  const auto w = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  const auto h = static_cast<std::uint32_t>(get_le(bytes, 12, 4));
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    throw Error(ErrorCode::MalformedHeader, "texture map dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - kHeaderSize != 8 * n) throw Error(ErrorCode::TruncatedData, "texture map payload");
  TextureMap map(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < n; ++i) map.data[i] = std::bit_cast<double>(get_le(bytes, kHeaderSize + 8 * i, 8));
  return map;
}

Normalized8 normalize_to_gray(const TextureMap& map) {
  Normalized8 out{GrayImage(map.width, map.height), 0.0, 0.0};
  if (map.empty()) return out;
  const auto [lo, hi] = std::minmax_element(map.data.begin(), map.data.end());
  out.min = *lo;
  out.max = *hi;
  const double range = out.max - out.min;
  if (range > 0.0) {
    for (std::size_t i = 0; i < map.size(); ++i) {
      const double v = std::floor((map.data[i] - out.min) / range * 255.0 + 0.5);
      out.image.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return out;
}

void write_texture_pgm(const std::filesystem::path& pgm_path, const TextureMap& map) {
  const auto norm = normalize_to_gray(map);
  write_pgm(pgm_path, norm.image);
  char buf[96];
  std::snprintf(buf, sizeof buf, "min %.17g\nmax %.17g\n", norm.min, norm.max);
  auto sidecar = pgm_path;
  sidecar += ".scale.txt";
  write_text_file(sidecar, buf);
}

void write_texture_f64(const std::filesystem::path& path, const TextureMap& map) {
  write_file_bytes(path, encode_texture_map(map));
}

TextureMap read_texture_f64(const std::filesystem::path& path) {
  return decode_texture_map(read_file_bytes(path));
}

}  // namespace texturedge
