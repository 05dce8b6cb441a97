#include "texturedge/imgio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "texturedge/error.hpp"

namespace texturedge {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::uint8_t peek() const noexcept { return bytes_[pos_]; }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads one unsigned decimal token. `what` names the field for messages.
  unsigned long read_uint(const char* what, ErrorCode eof_code) {
    skip_space_and_comments();
    if (at_end()) throw Error(eof_code, std::string("missing ") + what);
    if (!std::isdigit(peek())) {
      throw Error(ErrorCode::MalformedHeader, std::string("non-numeric ") + what);
    }
    unsigned long value = 0;
    while (!at_end() && std::isdigit(peek())) {
      value = value * 10 + static_cast<unsigned long>(peek() - '0');
      if (value > 1'000'000'000UL) throw Error(ErrorCode::MalformedHeader, std::string(what) + " too large");
      ++pos_;
    }
    if (!at_end() && !std::isspace(peek()) && peek() != '#') {
      throw Error(ErrorCode::MalformedHeader, std::string("garbage after ") + what);
    }
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw Error(ErrorCode::BadMagic, "expected P5 or P2");
  }
  const bool binary = bytes[1] == '5';
  PgmReader rd(bytes);
  rd.advance(2);
  if (!rd.at_end() && !std::isspace(rd.peek()) && rd.peek() != '#') {
    throw Error(ErrorCode::BadMagic, "magic not followed by whitespace");
  }

  const auto width = rd.read_uint("width", ErrorCode::TruncatedData);
  const auto height = rd.read_uint("height", ErrorCode::TruncatedData);
  const auto maxval = rd.read_uint("maxval", ErrorCode::TruncatedData);
  if (width == 0 || height == 0) throw Error(ErrorCode::MalformedHeader, "zero dimension");
  if (maxval > 255) throw Error(ErrorCode::MaxvalUnsupported, "maxval " + std::to_string(maxval));
  if (maxval == 0) throw Error(ErrorCode::MalformedHeader, "maxval 0");

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  GrayImage img(static_cast<int>(width), static_cast<int>(height));

  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (rd.at_end()) throw Error(ErrorCode::TruncatedData, "no raster data");
    rd.advance(1);
    if (bytes.size() - rd.pos() < count) {
      throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(count) + " samples, got " +
                                                std::to_string(bytes.size() - rd.pos()));
    }
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos()), count, img.data.begin());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = rd.read_uint("sample", ErrorCode::TruncatedData);
      if (v > maxval) throw Error(ErrorCode::MalformedHeader, "sample exceeds maxval");
      img.data[i] = static_cast<std::uint8_t>(v);
    }
  }
  if (binary) {
    for (auto v : img.data) {
      if (v > maxval) throw Error(ErrorCode::MalformedHeader, "sample exceeds maxval");
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + img.size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

GrayImage read_pgm(const std::filesystem::path& path) { return decode_pgm(read_file_bytes(path)); }

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file_bytes(path, encode_pgm(img));
}

// ---------------------------------------------------------------------------

char tissue_code(Tissue t) noexcept {
  switch (t) {
    case Tissue::Fatty: return 'F';
    case Tissue::Glandular: return 'G';
    case Tissue::Dense: return 'D';
  }
  return '?';
}

std::string_view abnormality_code(Abnormality a) noexcept {
  switch (a) {
    case Abnormality::Calc: return "CALC";
    case Abnormality::Circ: return "CIRC";
    case Abnormality::Spic: return "SPIC";
    case Abnormality::Misc: return "MISC";
    case Abnormality::Arch: return "ARCH";
    case Abnormality::Asym: return "ASYM";
    case Abnormality::Norm: return "NORM";
  }
  return "?";
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<Tissue> parse_tissue(std::string_view s) {
  if (s == "F") return Tissue::Fatty;
  if (s == "G") return Tissue::Glandular;
  if (s == "D") return Tissue::Dense;
  return std::nullopt;
}

std::optional<Abnormality> parse_abnormality(std::string_view s) {
  for (auto a : {Abnormality::Calc, Abnormality::Circ, Abnormality::Spic, Abnormality::Misc,
                 Abnormality::Arch, Abnormality::Asym, Abnormality::Norm}) {
    if (s == abnormality_code(a)) return a;
  }
  return std::nullopt;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + why);
}

MiasRecord parse_record(const std::vector<std::string_view>& tok, std::size_t line_no) {
  if (tok.size() < 3) malformed(line_no, "expected at least `ref tissue abnormality`");
  MiasRecord rec;
  rec.ref_id = std::string(tok[0]);
  const auto tissue = parse_tissue(tok[1]);
  if (!tissue) malformed(line_no, "unknown tissue class '" + std::string(tok[1]) + "'");
  rec.tissue = *tissue;
  const auto abn = parse_abnormality(tok[2]);
  if (!abn) malformed(line_no, "unknown abnormality '" + std::string(tok[2]) + "'");
  rec.abnormality = *abn;

  // Everything after an annotation note marker is free text.
  std::size_t n = tok.size();
  for (std::size_t i = 3; i < tok.size(); ++i) {
    if (tok[i].starts_with('*')) {
      n = i;
      break;
    }
  }
  if (rec.abnormality == Abnormality::Norm) {
    if (n != 3) malformed(line_no, "NORM record carries extra fields");
    return rec;
  }
  if (n == 3) return rec;
  if (tok[3] == "B") {
    rec.severity = Severity::Benign;
  } else if (tok[3] == "M") {
    rec.severity = Severity::Malignant;
  } else {
    malformed(line_no, "unknown severity '" + std::string(tok[3]) + "'");
  }
  if (n == 4) return rec;
  if (n != 7) malformed(line_no, "geometry needs exactly `x y radius`");
  const auto x = parse_int(tok[4]);
  const auto y = parse_int(tok[5]);
  const auto r = parse_int(tok[6]);
  if (!x || !y || !r) malformed(line_no, "non-integer geometry");
  if (*x < 0 || *y < 0) malformed(line_no, "negative center coordinate");
  if (*r <= 0) malformed(line_no, "radius must be positive");
  rec.center_x = *x;
  rec.center_y = *y;
  rec.radius = *r;
  return rec;
}

}  // namespace

std::vector<MiasRecord> parse_mias_index(std::string_view text) {
  std::vector<MiasRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto tokens = split_ws(text.substr(start, end - start));
    if (!tokens.empty()) records.push_back(parse_record(tokens, line_no));
    start = end + 1;
  }
  return records;
}

std::vector<MiasRecord> load_mias_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string table;
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const auto& first = tokens.front();
    const bool is_row = first.size() > 3 && first.starts_with("mdb") &&
                        std::all_of(first.begin() + 3, first.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (is_row) {
      table += line;
      table += '\n';
    }
  }
  return parse_mias_index(table);
}

Point mias_to_image(int x, int y, int image_height) noexcept { return {x, image_height - 1 - y}; }

// ---------------------------------------------------------------------------

Rect roi_box(int image_width, int image_height, const RoiSpec& roi) {
  if (roi.radius <= 0) throw Error(ErrorCode::CenterOutOfBounds, "ROI radius must be positive");
  if (!(roi.margin_factor >= 1.0)) throw Error(ErrorCode::InvalidConfig, "margin_factor must be >= 1");
  if (roi.center_x < 0 || roi.center_y < 0 || roi.center_x >= image_width || roi.center_y >= image_height) {
    throw Error(ErrorCode::CenterOutOfBounds, "ROI center (" + std::to_string(roi.center_x) + "," +
                                                  std::to_string(roi.center_y) + ") outside " +
                                                  std::to_string(image_width) + "x" +
                                                  std::to_string(image_height) + " image");
  }
  const auto side = static_cast<int>(std::lround(2.0 * roi.radius * roi.margin_factor));
  const int x0 = std::max(0, roi.center_x - side / 2);
  const int y0 = std::max(0, roi.center_y - side / 2);
  const int x1 = std::min(image_width, roi.center_x - side / 2 + side);
  const int y1 = std::min(image_height, roi.center_y - side / 2 + side);
  if (x1 <= x0 || y1 <= y0) throw Error(ErrorCode::CenterOutOfBounds, "empty ROI crop");
  return {x0, y0, x1 - x0, y1 - y0};
}

Roi extract_roi(const GrayImage& img, const RoiSpec& roi) {
  const auto box = roi_box(img.width, img.height, roi);
  return {crop(img, box), box};
}

}  // namespace texturedge
