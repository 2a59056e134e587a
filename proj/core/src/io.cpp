#include "flowgen/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "flowgen/error.hpp"

namespace flowgen {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32_le(const char* p) noexcept {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::uint32_t get_u32_be(const char* p) noexcept {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

std::string with_name(std::string_view name, std::string_view what) {
  std::string s(name);
  s += ": ";
  s += what;
  return s;
}

/// Tokenizer for PNM/PFM headers: whitespace-separated tokens, '#' comments.
class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, std::string_view name, ErrorCode bad)
      : bytes_(bytes), name_(name), bad_(bad) {}

  std::string_view token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
    if (start == pos_) throw Error(ErrorCode::TruncatedFile, with_name(name_, "header ends early"));
    return bytes_.substr(start, pos_ - start);
  }

  long integer() {
    const std::string_view t = token();
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw Error(bad_, with_name(name_, "malformed header number"));
    }
    return v;
  }

  double real() {
    const std::string t(token());
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw Error(bad_, with_name(name_, "malformed header number"));
    return v;
  }

  /// Consumes the single whitespace byte that ends the header.
  std::size_t data_start() {
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::TruncatedFile, with_name(name_, "missing pixel data"));
    return pos_ + 1;
  }

 private:
  static bool is_space(char c) noexcept { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::string_view name_;
  ErrorCode bad_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---- files -----------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, tmp.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, path.string() + ": rename failed: " + ec.message());
}

// ---- .flo ------------------------------------------------------------------

std::string encode_flo(const FlowField& flow) {
  for (float f : flow.data()) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidArgument, "flow contains non-finite values");
  }
  std::string out;
  out.reserve(12 + 4 * flow.data().size());
  put_f32(out, kFloMagic);
  put_u32(out, static_cast<std::uint32_t>(flow.width()));
  put_u32(out, static_cast<std::uint32_t>(flow.height()));
  for (float f : flow.data()) put_f32(out, f);
  return out;
}

FlowField decode_flo(std::string_view bytes, std::string_view name) {
  if (bytes.size() < 4) throw Error(ErrorCode::TruncatedFile, with_name(name, "shorter than the magic"));
  if (std::bit_cast<float>(get_u32_le(bytes.data())) != kFloMagic) {
    throw Error(ErrorCode::BadMagic, with_name(name, "bad .flo magic"));
  }
  if (bytes.size() < 12) throw Error(ErrorCode::TruncatedFile, with_name(name, "truncated header"));
  const auto width = static_cast<std::int32_t>(get_u32_le(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(get_u32_le(bytes.data() + 8));
  if (width <= 0 || height <= 0 || width > kMaxFloSide || height > kMaxFloSide) {
    throw Error(ErrorCode::DimensionOverflow, with_name(name, "dimensions outside 1..100000"));
  }
  const std::size_t count = 2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < 12 + 4 * count) throw Error(ErrorCode::TruncatedFile, with_name(name, "truncated data"));
  FlowField flow(width, height);
  auto data = flow.data();
  for (std::size_t i = 0; i < count; ++i) data[i] = std::bit_cast<float>(get_u32_le(bytes.data() + 12 + 4 * i));
  return flow;
}

void write_flo(const FlowField& flow, const fs::path& path) { write_file_atomic(path, encode_flo(flow)); }

FlowField read_flo(const fs::path& path) { return decode_flo(read_file(path), path.string()); }

// ---- PFM -------------------------------------------------------------------

std::string encode_pfm(const ImageBuffer& gray) {
  if (gray.channels() != 1) throw Error(ErrorCode::InvalidArgument, "PFM writer expects a 1-channel image");
  std::string out = "Pf\n" + std::to_string(gray.width()) + " " + std::to_string(gray.height()) + "\n-1\n";
  out.reserve(out.size() + 4 * gray.pixel_count());
  for (int y = gray.height() - 1; y >= 0; --y) {
    for (int x = 0; x < gray.width(); ++x) put_f32(out, gray.at(x, y, 0));
  }
  return out;
}

ImageBuffer decode_pfm(std::string_view bytes, std::string_view name) {
  HeaderReader header(bytes, name, ErrorCode::BadHeader);
  const std::string_view magic = header.token();
  if (magic != "Pf") throw Error(ErrorCode::BadHeader, with_name(name, "not a grayscale PFM (expected 'Pf')"));
  const long width = header.integer();
  const long height = header.integer();
  const double scale = header.real();
  if (width <= 0 || height <= 0 || width > kMaxFloSide || height > kMaxFloSide || scale == 0.0) {
    throw Error(ErrorCode::BadHeader, with_name(name, "invalid PFM dimensions or scale"));
  }
  const std::size_t start = header.data_start();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < start + 4 * count) throw Error(ErrorCode::TruncatedFile, with_name(name, "truncated data"));
  ImageBuffer img(static_cast<int>(width), static_cast<int>(height), 1);
  const bool little = scale < 0.0;
  const char* p = bytes.data() + start;
  for (long y = height - 1; y >= 0; --y) {
    for (long x = 0; x < width; ++x, p += 4) {
      img.at(static_cast<int>(x), static_cast<int>(y), 0) = std::bit_cast<float>(little ? get_u32_le(p) : get_u32_be(p));
    }
  }
  return img;
}

void write_pfm(const ImageBuffer& gray, const fs::path& path) { write_file_atomic(path, encode_pfm(gray)); }

ImageBuffer read_pfm(const fs::path& path) { return decode_pfm(read_file(path), path.string()); }

// ---- PNM -------------------------------------------------------------------

std::uint8_t quantize(float v) noexcept {
  const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

std::string encode_pnm(const ImageBuffer& image) {
  const bool color = image.channels() == 3;
  std::string out = std::string(color ? "P6\n" : "P5\n") + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() + image.data().size());
  for (float v : image.data()) out.push_back(static_cast<char>(quantize(v)));
  return out;
}

ImageBuffer decode_pnm(std::string_view bytes, std::string_view name) {
  HeaderReader header(bytes, name, ErrorCode::DecodeFailure);
  const std::string_view magic = header.token();
  if (magic != "P6" && magic != "P5") throw Error(ErrorCode::DecodeFailure, with_name(name, "not a binary PPM/PGM"));
  const int channels = magic == "P6" ? 3 : 1;
  const long width = header.integer();
  const long height = header.integer();
  const long maxval = header.integer();
  if (width <= 0 || height <= 0 || width > kMaxFloSide || height > kMaxFloSide || maxval != 255) {
    throw Error(ErrorCode::DecodeFailure, with_name(name, "unsupported PNM dimensions or maxval"));
  }
  const std::size_t start = header.data_start();
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  if (bytes.size() < start + count) throw Error(ErrorCode::DecodeFailure, with_name(name, "truncated pixel data"));
  ImageBuffer img(static_cast<int>(width), static_cast<int>(height), channels);
  auto data = img.data();
  for (std::size_t i = 0; i < count; ++i) {
    data[i] = static_cast<float>(static_cast<unsigned char>(bytes[start + i]) / 255.0);
  }
  return img;
}

void write_pnm(const ImageBuffer& image, const fs::path& path) { write_file_atomic(path, encode_pnm(image)); }

ImageBuffer read_pnm(const fs::path& path) { return decode_pnm(read_file(path), path.string()); }

std::string encode_mask_pgm(const BoolMap& mask) {
  std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
  for (std::uint8_t b : mask.data()) out.push_back(static_cast<char>(b ? 255 : 0));
  return out;
}

BoolMap decode_mask_pgm(std::string_view bytes, std::string_view name) {
  const ImageBuffer gray = decode_pnm(bytes, name);
  if (gray.channels() != 1) throw Error(ErrorCode::DecodeFailure, with_name(name, "mask must be a PGM"));
  BoolMap mask(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) mask.set(x, y, gray.at(x, y, 0) >= 0.5f);
  }
  return mask;
}

// ---- PNG -------------------------------------------------------------------

ImageBuffer read_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  const std::string name = path.string();
  if (!png_image_begin_read_from_file(&image, name.c_str())) {
    throw Error(ErrorCode::DecodeFailure, with_name(name, image.message));
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::DecodeFailure, with_name(name, image.message));
  }
  ImageBuffer img(static_cast<int>(image.width), static_cast<int>(image.height), 3);
  auto data = img.data();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(buffer[i] / 255.0);
  return img;
}

ImageBuffer read_rgb_image(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  ImageBuffer img;
  if (ext == ".png") {
    img = read_png(path);
  } else {
    img = read_pnm(path);
  }
  if (img.channels() == 3) return img;
  ImageBuffer rgb(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = img.at(x, y, 0);
    }
  }
  return rgb;
}

// ---- dataset layout --------------------------------------------------------

std::string sample_prefix(std::uint64_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return digits + "_";
}

SamplePaths sample_paths(const fs::path& dir, std::uint64_t index) {
  const std::string p = sample_prefix(index);
  return {dir / (p + "img1.ppm"), dir / (p + "img2.ppm"), dir / (p + "flow.flo"), dir / (p + "occ.pgm")};
}

void write_sample(const fs::path& dir, std::uint64_t index, const ImageBuffer& frame1,
                  const ImageBuffer& frame2, const FlowField& flow, const BoolMap& occ) {
  const SamplePaths paths = sample_paths(dir, index);
  write_file_atomic(paths.img1, encode_pnm(frame1));
  write_file_atomic(paths.img2, encode_pnm(frame2));
  write_file_atomic(paths.occ, encode_mask_pgm(occ));
  write_file_atomic(paths.flow, encode_flo(flow));
}

bool sample_complete(const fs::path& dir, std::uint64_t index) {
  const SamplePaths p = sample_paths(dir, index);
  return fs::exists(p.img1) && fs::exists(p.img2) && fs::exists(p.flow) && fs::exists(p.occ);
}

StoredSample read_sample(const fs::path& dir, std::uint64_t index) {
  const SamplePaths p = sample_paths(dir, index);
  StoredSample s;
  s.frame1 = read_pnm(p.img1);
  s.frame2 = read_pnm(p.img2);
  s.flow = read_flo(p.flow);
  s.occ = decode_mask_pgm(read_file(p.occ), p.occ.string());
  return s;
}

std::vector<std::uint64_t> list_flow_indices(const fs::path& dir) {
  std::vector<std::uint64_t> indices;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    constexpr std::string_view suffix = "_flow.flo";
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    const std::string_view digits(name.data(), name.size() - suffix.size());
    std::uint64_t idx = 0;
    const auto [ptr, perr] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (perr == std::errc() && ptr == digits.data() + digits.size()) indices.push_back(idx);
  }
  if (ec) throw Error(ErrorCode::IoFailure, dir.string() + ": " + ec.message());
  std::sort(indices.begin(), indices.end());
  return indices;
}

std::string encode_sample_record(std::uint64_t index, const ImageBuffer& frame1, const ImageBuffer& frame2,
                                 const FlowField& flow, const BoolMap& occ) {
  std::string out = "sample " + std::to_string(index) + " " + std::to_string(flow.width()) + " " +
                    std::to_string(flow.height()) + "\n";
  out += encode_pnm(frame1);
  out += encode_pnm(frame2);
  out += encode_flo(flow);
  out += encode_mask_pgm(occ);
  return out;
}

// ---- manifest --------------------------------------------------------------

std::string format_manifest(const DatasetManifest& m) {
  std::string out = m.config_text;
  if (!out.empty() && out.back() != '\n') out.push_back('\n');
  out += "manifest.config_hash = " + m.config_hash + "\n";
  out += "manifest.created = " + m.created + "\n";
  out += "manifest.master_seed = " + std::to_string(m.master_seed) + "\n";
  out += "manifest.samples = " + m.samples + "\n";
  out += "manifest.seed_rule = " + m.seed_rule + "\n";
  out += "manifest.tool_version = " + m.tool_version + "\n";
  return out;
}

fs::path manifest_path(const fs::path& dir) { return dir / "manifest.txt"; }

void write_manifest(const fs::path& dir, const DatasetManifest& manifest) {
  write_file_atomic(manifest_path(dir), format_manifest(manifest));
}

}  // namespace flowgen
