#pragma once

#include <string_view>

#include "flowgen/image.hpp"

namespace flowgen {

enum class BayerPattern { RGGB, BGGR, GRBG, GBRG };

std::string_view to_string(BayerPattern p) noexcept;
/// Accepts "rggb", "bggr", "grbg", "gbrg". Throws ConfigError.
BayerPattern bayer_pattern_from_string(std::string_view name);

struct CameraProfile {
  /// Blur span per pixel of distance from the image center.
  double radial_blur_strength = 0.0;
  double gaussian_sigma = 0.0;
  /// Contrast gain about mid-gray; 1 disables.
  double contrast_boost = 1.0;
  bool bayer = false;
  BayerPattern pattern = BayerPattern::RGGB;

  bool is_identity() const noexcept;
  /// Throws InvalidArgument for negative strengths or a boost below 1.
  void validate() const;
  bool operator==(const CameraProfile&) const = default;
};

/// Average of 9 bilinear samples along the line through the image center,
/// spanning strength * r pixels centered on the pixel.
ImageBuffer radial_blur(const ImageBuffer& img, double strength);
/// Separable, normalized Gaussian with radius ceil(3 sigma), edge clamped.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);
ImageBuffer contrast_boost(const ImageBuffer& img, double gain);

/// Single-channel sensor image: each pixel keeps the channel its filter passes.
ImageBuffer bayer_mosaic(const ImageBuffer& rgb, BayerPattern pattern);
/// Bilinear demosaic: every channel is the mean of the same-filter pixels in
/// the in-bounds 3 x 3 neighborhood. Odd sizes need no special case.
ImageBuffer demosaic(const ImageBuffer& sensor, BayerPattern pattern);
ImageBuffer bayer_cycle(const ImageBuffer& rgb, BayerPattern pattern);

/// Radial blur, Gaussian blur, contrast boost, Bayer cycle, in that order.
ImageBuffer apply_profile(const ImageBuffer& img, const CameraProfile& profile);

/// Degrades both frames identically. Flow is never touched.
void apply_profile(ImageBuffer& frame1, ImageBuffer& frame2, const CameraProfile& profile);

/// Names usable as presets: "none", "bumblebee", "bayer".
CameraProfile camera_profile(std::string_view name);

}  // namespace flowgen
