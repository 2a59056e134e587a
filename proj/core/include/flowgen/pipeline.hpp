#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flowgen/config.hpp"
#include "flowgen/image.hpp"
#include "flowgen/io.hpp"

namespace flowgen {

/// One finished training sample: rendered, augmented and degraded.
struct Sample {
  ImageBuffer frame1;
  ImageBuffer frame2;
  FlowField flow;
  OcclusionMask occ;
  /// False where augmentation pulled content from outside the source frame.
  BoolMap valid;
};

/// Pure function of (config, index). `photo_pool` is required for the photo
/// texture family only.
Sample generate_sample(const GenConfig& config, std::uint64_t index,
                       const std::vector<Texture>* photo_pool = nullptr);

/// The occlusion mask as persisted: occluded or invalid.
BoolMap persisted_occlusion(const Sample& sample);

/// Loads the photo pool if the config uses photo textures, else returns an
/// empty pool.
std::vector<Texture> load_pool_for(const GenConfig& config);

struct GenerationOptions {
  std::filesystem::path out_dir;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;  // exclusive
  int threads = 1;
  /// Regenerate samples whose four files already exist.
  bool overwrite = false;
  /// Manifest creation stamp; "none" keeps output trees reproducible.
  std::string created = "none";
  /// Called after each finished sample (from worker threads, serialized).
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct GenerationStats {
  std::uint64_t generated = 0;
  std::uint64_t skipped = 0;
  double seconds = 0.0;
};

/// Writes samples [begin, end) and the manifest into out_dir. Samples are
/// independent, so the output does not depend on the thread count.
GenerationStats run_generation(const GenConfig& config, const GenerationOptions& options);

/// Writes framed sample records (see encode_sample_record) in index order
/// starting at `begin`, until `end` or until the stream fails. Returns the
/// number of records written.
std::uint64_t run_streaming(const GenConfig& config, std::uint64_t begin, std::optional<std::uint64_t> end,
                            int threads, std::ostream& out);

DatasetManifest make_manifest(const GenConfig& config, std::string samples, std::string created);

/// Version string recorded in manifests.
std::string_view tool_version() noexcept;

}  // namespace flowgen
