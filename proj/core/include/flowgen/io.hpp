#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "flowgen/image.hpp"

namespace flowgen {

namespace fs = std::filesystem;

// ---- .flo ------------------------------------------------------------------
// float32 202021.25, int32 width, int32 height, then row-major (u, v) float32
// pairs. Everything little-endian.

inline constexpr float kFloMagic = 202021.25f;
inline constexpr int kMaxFloSide = 100000;

std::string encode_flo(const FlowField& flow);
/// Throws BadMagic, TruncatedFile or DimensionOverflow.
FlowField decode_flo(std::string_view bytes, std::string_view name = "<memory>");
void write_flo(const FlowField& flow, const fs::path& path);
FlowField read_flo(const fs::path& path);

// ---- PFM (grayscale) -------------------------------------------------------
// "Pf\n<w> <h>\n-1\n" then float32 rows bottom-to-top. Negative scale means
// little-endian; a positive scale is read as big-endian.

std::string encode_pfm(const ImageBuffer& gray);
/// Throws BadHeader (including color "PF" files) or TruncatedFile.
ImageBuffer decode_pfm(std::string_view bytes, std::string_view name = "<memory>");
void write_pfm(const ImageBuffer& gray, const fs::path& path);
ImageBuffer read_pfm(const fs::path& path);

// ---- 8-bit PNM / PNG -------------------------------------------------------

/// floor(v * 255 + 0.5) after clamping v to [0, 1].
std::uint8_t quantize(float v) noexcept;

/// Binary P6 for 3-channel images, P5 for 1-channel; maxval 255.
std::string encode_pnm(const ImageBuffer& image);
ImageBuffer decode_pnm(std::string_view bytes, std::string_view name = "<memory>");
void write_pnm(const ImageBuffer& image, const fs::path& path);
ImageBuffer read_pnm(const fs::path& path);

/// Occlusion / validity masks as P5 with values 0 and 255.
std::string encode_mask_pgm(const BoolMap& mask);
BoolMap decode_mask_pgm(std::string_view bytes, std::string_view name = "<memory>");

/// RGB decode of a PNG file (gray is replicated, alpha dropped).
ImageBuffer read_png(const fs::path& path);
/// PNG or PNM chosen by extension; always returns 3 channels.
ImageBuffer read_rgb_image(const fs::path& path);

// ---- dataset layout --------------------------------------------------------

/// Zero-padded six-digit prefix, e.g. "000007_".
std::string sample_prefix(std::uint64_t index);

struct SamplePaths {
  fs::path img1, img2, flow, occ;
};
SamplePaths sample_paths(const fs::path& dir, std::uint64_t index);

/// Writes the four sample files. Each file is written to a temporary name and
/// renamed, so a present file is always complete. Throws IoFailure.
void write_sample(const fs::path& dir, std::uint64_t index, const ImageBuffer& frame1,
                  const ImageBuffer& frame2, const FlowField& flow, const BoolMap& occ);
bool sample_complete(const fs::path& dir, std::uint64_t index);

struct StoredSample {
  ImageBuffer frame1, frame2;
  FlowField flow;
  BoolMap occ;
};
StoredSample read_sample(const fs::path& dir, std::uint64_t index);

/// Indices of every NNNNNN_flow.flo in `dir`, ascending.
std::vector<std::uint64_t> list_flow_indices(const fs::path& dir);

/// Record framing used for `--out -` streaming:
/// "sample <index> <width> <height>\n", then the P6 frame 1, P6 frame 2, .flo
/// and P5 occlusion encodings back to back.
std::string encode_sample_record(std::uint64_t index, const ImageBuffer& frame1, const ImageBuffer& frame2,
                                 const FlowField& flow, const BoolMap& occ);

// ---- manifest --------------------------------------------------------------

struct DatasetManifest {
  std::string config_text;  // canonical config, one "key = value" per line
  std::string config_hash;
  std::string tool_version;
  std::uint64_t master_seed = 0;
  std::string samples;      // "<lo> <hi>" or "streaming"
  std::string seed_rule;
  std::string created;
};

/// The canonical config lines followed by "manifest.*" keys, so a manifest is
/// itself a loadable config file.
std::string format_manifest(const DatasetManifest& manifest);
void write_manifest(const fs::path& dir, const DatasetManifest& manifest);
fs::path manifest_path(const fs::path& dir);

std::string read_file(const fs::path& path);
/// Atomic replace via a temporary file. Throws IoFailure.
void write_file_atomic(const fs::path& path, std::string_view bytes);

}  // namespace flowgen
