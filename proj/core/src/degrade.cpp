#include "flowgen/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flowgen/error.hpp"

namespace flowgen {

std::string_view to_string(BayerPattern p) noexcept {
  switch (p) {
    case BayerPattern::RGGB: return "rggb";
    case BayerPattern::BGGR: return "bggr";
    case BayerPattern::GRBG: return "grbg";
    case BayerPattern::GBRG: return "gbrg";
  }
  return "rggb";
}

BayerPattern bayer_pattern_from_string(std::string_view name) {
  if (name == "rggb") return BayerPattern::RGGB;
  if (name == "bggr") return BayerPattern::BGGR;
  if (name == "grbg") return BayerPattern::GRBG;
  if (name == "gbrg") return BayerPattern::GBRG;
  throw Error(ErrorCode::ConfigError, "unknown Bayer pattern '" + std::string(name) + "'");
}

bool CameraProfile::is_identity() const noexcept {
  return radial_blur_strength == 0.0 && gaussian_sigma == 0.0 && contrast_boost == 1.0 && !bayer;
}

void CameraProfile::validate() const {
  if (!(radial_blur_strength >= 0.0) || !(gaussian_sigma >= 0.0) || gaussian_sigma > 50.0) {
    throw Error(ErrorCode::InvalidArgument, "blur strengths must be >= 0 (sigma <= 50)");
  }
  if (!(contrast_boost >= 1.0)) throw Error(ErrorCode::InvalidArgument, "contrast boost must be >= 1");
}

ImageBuffer radial_blur(const ImageBuffer& img, double strength) {
  if (!(strength >= 0.0)) throw Error(ErrorCode::InvalidArgument, "radial blur strength must be >= 0");
  if (strength == 0.0) return img;
  constexpr int kTaps = 9;
  ImageBuffer out(img.width(), img.height(), img.channels());
  const double cx = 0.5 * img.width();
  const double cy = 0.5 * img.height();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double r = std::hypot(dx, dy);
      if (r == 0.0) {
        for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(x, y, c);
        continue;
      }
      // Unit radial direction times the span; taps at -1/2 .. +1/2 of it.
      const double sx = dx / r * strength * r;
      const double sy = dy / r * strength * r;
      for (int c = 0; c < img.channels(); ++c) {
        double acc = 0.0;
        for (int k = 0; k < kTaps; ++k) {
          const double t = static_cast<double>(k) / (kTaps - 1) - 0.5;
          acc += img.sample(x + t * sx, y + t * sy, c);
        }
        out.at(x, y, c) = static_cast<float>(acc / kTaps);
      }
    }
  }
  return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be >= 0");
  if (sigma == 0.0) return img;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;

  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  std::vector<double> tmp(static_cast<std::size_t>(w) * h * ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[static_cast<std::size_t>(i + radius)] * img.at(std::clamp(x + i, 0, w - 1), y, c);
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  ImageBuffer out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int yy = std::clamp(y + i, 0, h - 1);
          acc += kernel[static_cast<std::size_t>(i + radius)] * tmp[(static_cast<std::size_t>(yy) * w + x) * ch + c];
        }
        out.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

ImageBuffer contrast_boost(const ImageBuffer& img, double gain) {
  if (!(gain >= 1.0)) throw Error(ErrorCode::InvalidArgument, "contrast boost must be >= 1");
  if (gain == 1.0) return img;
  ImageBuffer out = img;
  const double offset = 0.5 * (1.0 - gain);
  for (float& v : out.data()) v = static_cast<float>(std::clamp(gain * v + offset, 0.0, 1.0));
  return out;
}

namespace {

/// Channel passed by the filter at (x, y): 0 red, 1 green, 2 blue.
int filter_channel(BayerPattern p, int x, int y) noexcept {
  const int cell = (y & 1) * 2 + (x & 1);  // 0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right
  switch (p) {
    case BayerPattern::RGGB: return cell == 0 ? 0 : cell == 3 ? 2 : 1;
    case BayerPattern::BGGR: return cell == 0 ? 2 : cell == 3 ? 0 : 1;
    case BayerPattern::GRBG: return cell == 1 ? 0 : cell == 2 ? 2 : 1;
    case BayerPattern::GBRG: return cell == 1 ? 2 : cell == 2 ? 0 : 1;
  }
  return 1;
}

}  // namespace

ImageBuffer bayer_mosaic(const ImageBuffer& rgb, BayerPattern pattern) {
  if (rgb.channels() != 3) throw Error(ErrorCode::InvalidArgument, "Bayer mosaic needs an RGB image");
  ImageBuffer sensor(rgb.width(), rgb.height(), 1);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) sensor.at(x, y, 0) = rgb.at(x, y, filter_channel(pattern, x, y));
  }
  return sensor;
}

ImageBuffer demosaic(const ImageBuffer& sensor, BayerPattern pattern) {
  if (sensor.channels() != 1) throw Error(ErrorCode::InvalidArgument, "demosaic needs a single-channel sensor image");
  const int w = sensor.width();
  const int h = sensor.height();
  ImageBuffer out(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int own = filter_channel(pattern, x, y);
      double sum[3] = {0.0, 0.0, 0.0};
      int count[3] = {0, 0, 0};
      for (int j = std::max(0, y - 1); j <= std::min(h - 1, y + 1); ++j) {
        for (int i = std::max(0, x - 1); i <= std::min(w - 1, x + 1); ++i) {
          const int c = filter_channel(pattern, i, j);
          sum[c] += sensor.at(i, j, 0);
          ++count[c];
        }
      }
      for (int c = 0; c < 3; ++c) {
        if (c == own) {
          out.at(x, y, c) = sensor.at(x, y, 0);
        } else if (count[c] > 0) {
          out.at(x, y, c) = static_cast<float>(sum[c] / count[c]);
        } else {
          // Only for 1-pixel-wide images, where some filter is absent.
          out.at(x, y, c) = sensor.at(x, y, 0);
        }
      }
    }
  }
  return out;
}

ImageBuffer bayer_cycle(const ImageBuffer& rgb, BayerPattern pattern) {
  return demosaic(bayer_mosaic(rgb, pattern), pattern);
}

ImageBuffer apply_profile(const ImageBuffer& img, const CameraProfile& profile) {
  profile.validate();
  ImageBuffer out = radial_blur(img, profile.radial_blur_strength);
  out = gaussian_blur(out, profile.gaussian_sigma);
  out = contrast_boost(out, profile.contrast_boost);
  if (profile.bayer) out = bayer_cycle(out, profile.pattern);
  return out;
}

void apply_profile(ImageBuffer& frame1, ImageBuffer& frame2, const CameraProfile& profile) {
  if (profile.is_identity()) return;
  frame1 = apply_profile(frame1, profile);
  frame2 = apply_profile(frame2, profile);
}

CameraProfile camera_profile(std::string_view name) {
  CameraProfile p;
  if (name == "none") return p;
  if (name == "bumblebee") {
    // Nominal wide-angle stereo camera after undistortion; approximate.
    p.radial_blur_strength = 0.02;
    p.gaussian_sigma = 0.6;
    p.contrast_boost = 1.25;
    return p;
  }
  if (name == "bayer") {
    p.bayer = true;
    p.pattern = BayerPattern::RGGB;
    return p;
  }
  throw Error(ErrorCode::ConfigError, "unknown camera profile '" + std::string(name) + "'");
}

}  // namespace flowgen
