#pragma once

#include <array>

#include "flowgen/geometry.hpp"
#include "flowgen/image.hpp"

namespace flowgen {

class Rng;

/// Photometric change: out = clip(contrast * (gain_c * v - 0.5) + 0.5 +
/// brightness + noise).
struct ColorAugment {
  double brightness_offset = 0.0;
  double contrast_gain = 1.0;
  std::array<double, 3> channel_gain{1.0, 1.0, 1.0};
  double noise_std = 0.0;

  bool is_identity() const noexcept;
  bool operator==(const ColorAugment&) const = default;
};

/// `shared` (G) moves both frames; `incremental` (G_d) additionally moves
/// frame 2 only.
struct GeomAugment {
  Affine2 shared;
  Affine2 incremental;
};

/// The four augmentation switches. A "between" switch requires its "both"
/// switch.
struct AugmentMode {
  bool color_both = false;
  bool color_between = false;
  bool geom_both = false;
  bool geom_between = false;

  /// Throws ConfigError when a "between" switch is set without "both".
  void validate() const;
  bool any() const noexcept { return color_both || color_between || geom_both || geom_between; }
  bool operator==(const AugmentMode&) const = default;
};

/// Parameter ranges for drawing augmentations.
struct AugmentRanges {
  double brightness = 0.2;  // offset drawn from [-brightness, brightness]
  double contrast_min = 0.5;
  double contrast_max = 2.0;
  double gain_min = 0.8;
  double gain_max = 1.2;
  double noise_max = 0.04;
  double shift_fraction = 0.2;  // of width / height
  double rotation_deg = 17.0;
  double scale_min = 0.9;
  double scale_max = 2.0;
  /// Size of the frame-2-only deltas relative to the ranges above.
  double between_fraction = 0.25;

  bool operator==(const AugmentRanges&) const = default;
};

enum class FlowInterp { Bilinear, Nearest };

/// Deterministic for a given rng state; noise is drawn per pixel and channel.
ImageBuffer apply_color(const ImageBuffer& img, const ColorAugment& aug, Rng& rng);

struct GeomResult {
  ImageBuffer frame1;
  ImageBuffer frame2;
  FlowField flow;
  /// False where a pullback (through G or G_d o G) leaves the source frame.
  BoolMap valid;
};

/// frame1'(x) = frame1(G^-1 x), frame2'(x) = frame2((G_d G)^-1 x) and
/// flow'(x) = G_d(G(W(G^-1 x))) - x with W(p) = p + flow(p). Throws
/// SingularTransform.
GeomResult apply_geom(const ImageBuffer& frame1, const ImageBuffer& frame2, const FlowField& flow,
                      const GeomAugment& aug, FlowInterp interp = FlowInterp::Bilinear);

ColorAugment draw_color(const AugmentRanges& ranges, Rng& rng);
/// Frame-2 parameters: `base` perturbed within between_fraction of the ranges.
ColorAugment draw_color_delta(const ColorAugment& base, const AugmentRanges& ranges, Rng& rng);
/// Shift, rotation and scale about the image center.
Affine2 draw_geom(const AugmentRanges& ranges, int width, int height, Rng& rng);
/// A small transform within between_fraction of the ranges, about the center.
Affine2 draw_geom_delta(const AugmentRanges& ranges, int width, int height, Rng& rng);

struct AugmentedSample {
  ImageBuffer frame1;
  ImageBuffer frame2;
  FlowField flow;
  OcclusionMask occ;
  BoolMap valid;
};

/// Draws and applies the augmentations selected by `mode`. Each part uses its
/// own forked stream, so frame 1 does not depend on the "between" switches.
/// With every switch off the inputs come back unchanged.
AugmentedSample augment_sample(const ImageBuffer& frame1, const ImageBuffer& frame2, const FlowField& flow,
                               const OcclusionMask& occ, const AugmentMode& mode, const AugmentRanges& ranges,
                               FlowInterp interp, Rng& rng);

}  // namespace flowgen
