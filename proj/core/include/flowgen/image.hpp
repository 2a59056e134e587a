#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flowgen {

/// H x W x C float image, row-major with interleaved channels. Values are
/// expected in [0, 1].
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, float fill = 0.0f);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  float& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }
  float at(int x, int y, int c) const noexcept { return data_[index(x, y, c)]; }

  /// Bilinear sample at continuous index coordinates (pixel (i, j) sits at
  /// (i, j)); out-of-range lookups clamp to the edge.
  float sample(double xi, double yi, int c) const noexcept;
  /// Same as sample() for every channel at once; `out` holds channels() values.
  void sample_all(double xi, double yi, float* out) const noexcept;

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Dense displacement field in pixels, frame 1 -> frame 2. Interleaved (u, v).
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  float& u(int x, int y) noexcept { return data_[2 * offset(x, y)]; }
  float& v(int x, int y) noexcept { return data_[2 * offset(x, y) + 1]; }
  float u(int x, int y) const noexcept { return data_[2 * offset(x, y)]; }
  float v(int x, int y) const noexcept { return data_[2 * offset(x, y) + 1]; }

  /// Bilinear sample of (u, v) at continuous index coordinates, clamped.
  void sample(double xi, double yi, double& u_out, double& v_out) const noexcept;

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool operator==(const FlowField&) const = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Per-pixel boolean map (occlusion, validity).
class BoolMap {
 public:
  BoolMap() = default;
  BoolMap(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool get(int x, int y) const noexcept { return data_[offset(x, y)] != 0; }
  void set(int x, int y, bool value) noexcept { data_[offset(x, y)] = value ? 1 : 0; }
  std::size_t count() const noexcept;

  std::span<const std::uint8_t> data() const noexcept { return data_; }

  bool operator==(const BoolMap&) const = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using OcclusionMask = BoolMap;

/// Per-pixel layer label; kBackgroundLabel marks the background.
struct LabelMap {
  static constexpr int kBackgroundLabel = -1;

  int width = 0;
  int height = 0;
  std::vector<int> labels;

  int at(int x, int y) const noexcept {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

}  // namespace flowgen
