#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flowgen/augment.hpp"
#include "flowgen/degrade.hpp"
#include "flowgen/shapes.hpp"
#include "flowgen/textures.hpp"

namespace flowgen {

class Rng;

/// normal(mean, std) or uniform(min, max).
struct ScalarDistribution {
  enum class Kind { Normal, Uniform };
  Kind kind = Kind::Normal;
  double a = 0.0;  // mean or min
  double b = 0.0;  // std or max

  static ScalarDistribution normal(double mean, double stddev) noexcept { return {Kind::Normal, mean, stddev}; }
  static ScalarDistribution uniform(double lo, double hi) noexcept { return {Kind::Uniform, lo, hi}; }
  static ScalarDistribution constant(double v) noexcept { return {Kind::Uniform, v, v}; }

  /// Always consumes exactly two uniform draws, whatever the kind.
  double sample(Rng& rng) const;
  /// Multiplies std (normal) or both bounds (uniform) by k.
  ScalarDistribution scaled(double k) const noexcept;

  /// "normal(0,10)" / "uniform(-5,5)".
  std::string to_string() const;
  /// Throws ConfigError.
  static ScalarDistribution parse(std::string_view text);

  bool operator==(const ScalarDistribution&) const = default;
};

/// Frame-to-frame motion parameters of one kind of layer (background or
/// objects). Disabled components always sample the identity, but their draws
/// are still consumed so toggling one never shifts the others.
struct MotionDistribution {
  ScalarDistribution translation = ScalarDistribution::normal(0.0, 0.0);   // px, per axis
  ScalarDistribution rotation_deg = ScalarDistribution::normal(0.0, 0.0);
  ScalarDistribution log_scale = ScalarDistribution::normal(0.0, 0.0);     // natural log
  ScalarDistribution deform = ScalarDistribution::uniform(0.0, 0.0);       // px amplitude
  bool translation_enabled = true;
  bool rotation_enabled = true;
  bool scaling_enabled = true;
  bool deformation_enabled = false;
  /// Product of all factors applied through scale_distribution.
  double global_scale = 1.0;

  bool operator==(const MotionDistribution&) const = default;
};

/// Approximate "Sintel-like" defaults: most displacements below 10 px with a
/// tail towards 100 px. Deformations are configured but disabled.
MotionDistribution default_background_motion();
MotionDistribution default_object_motion();

/// Multiplies every magnitude parameter by k and records it in global_scale.
/// Throws NonpositiveFactor for k <= 0.
MotionDistribution scale_distribution(const MotionDistribution& motion, double k);

/// Random initial placement of a layer.
struct PlacementDistribution {
  ScalarDistribution rotation_deg = ScalarDistribution::uniform(-180.0, 180.0);
  ScalarDistribution log_scale = ScalarDistribution::uniform(0.0, 0.0);
  bool operator==(const PlacementDistribution&) const = default;
};

/// The complete recipe of a dataset. Every sample is a pure function of
/// (config, index).
struct GenConfig {
  int width = 512;
  int height = 384;
  int supersample = 4;
  std::uint64_t seed = 0;

  int min_objects = 16;
  int max_objects = 24;
  std::vector<ShapeClass> shape_classes{ShapeClass::Polygon, ShapeClass::Ellipse};
  ShapeParams shape;

  TextureFamily texture = TextureFamily::Clouds;
  int clouds_octaves = 6;
  int plasma_sites = 200;
  std::string photo_dir;

  PlacementDistribution object_placement;
  PlacementDistribution background_placement;
  MotionDistribution background_motion = default_background_motion();
  MotionDistribution object_motion = default_object_motion();

  AugmentMode augment;
  AugmentRanges augment_ranges;
  FlowInterp augment_interp = FlowInterp::Bilinear;

  CameraProfile camera;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
  bool operator==(const GenConfig&) const = default;
};

/// Sorted "key = value" lines, one per field, ending in a newline.
std::string canonical_text(const GenConfig& config);
/// 16 hex digits of FNV-1a 64 over canonical_text.
std::string config_hash(const GenConfig& config);

/// Applies "key = value" lines on top of `base`. Blank lines and lines
/// starting with '#' are skipped; "manifest.*" keys are ignored. Throws
/// ConfigError naming the line for unknown keys or bad values.
GenConfig parse_config(std::string_view text, GenConfig base = {});
/// Applies a single "key=value" override.
void set_config_value(GenConfig& config, std::string_view key, std::string_view value);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
GenConfig preset(std::string_view name);
/// Override lines a preset applies on top of the defaults.
std::vector<std::pair<std::string, std::string>> preset_overrides(std::string_view name);

}  // namespace flowgen
