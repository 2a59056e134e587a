#include "flowgen/image.hpp"

#include <algorithm>
#include <cmath>

#include "flowgen/error.hpp"

namespace flowgen {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
}

struct BilinearTap {
  int x0, x1, y0, y1;
  double fx, fy;
};

BilinearTap tap(double xi, double yi, int width, int height) noexcept {
  const double cx = std::clamp(xi, 0.0, static_cast<double>(width - 1));
  const double cy = std::clamp(yi, 0.0, static_cast<double>(height - 1));
  const int x0 = static_cast<int>(cx);
  const int y0 = static_cast<int>(cy);
  return {x0, std::min(x0 + 1, width - 1), y0, std::min(y0 + 1, height - 1), cx - x0, cy - y0};
}

// a + (b - a) * t returns a exactly when a == b, which keeps constant regions
// bit-exact under resampling.
inline double lerp(double a, double b, double t) noexcept { return a + (b - a) * t; }

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidArgument, "image must have 1 or 3 channels");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

float ImageBuffer::sample(double xi, double yi, int c) const noexcept {
  const BilinearTap t = tap(xi, yi, width_, height_);
  const double top = lerp(at(t.x0, t.y0, c), at(t.x1, t.y0, c), t.fx);
  const double bottom = lerp(at(t.x0, t.y1, c), at(t.x1, t.y1, c), t.fx);
  return static_cast<float>(lerp(top, bottom, t.fy));
}

void ImageBuffer::sample_all(double xi, double yi, float* out) const noexcept {
  const BilinearTap t = tap(xi, yi, width_, height_);
  const float* p00 = &data_[index(t.x0, t.y0, 0)];
  const float* p10 = &data_[index(t.x1, t.y0, 0)];
  const float* p01 = &data_[index(t.x0, t.y1, 0)];
  const float* p11 = &data_[index(t.x1, t.y1, 0)];
  for (int c = 0; c < channels_; ++c) {
    const double top = lerp(p00[c], p10[c], t.fx);
    const double bottom = lerp(p01[c], p11[c], t.fx);
    out[c] = static_cast<float>(lerp(top, bottom, t.fy));
  }
}

FlowField::FlowField(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(2 * pixel_count(), 0.0f);
}

void FlowField::sample(double xi, double yi, double& u_out, double& v_out) const noexcept {
  const BilinearTap t = tap(xi, yi, width_, height_);
  u_out = lerp(lerp(u(t.x0, t.y0), u(t.x1, t.y0), t.fx), lerp(u(t.x0, t.y1), u(t.x1, t.y1), t.fx),
               t.fy);
  v_out = lerp(lerp(v(t.x0, t.y0), v(t.x1, t.y0), t.fx), lerp(v(t.x0, t.y1), v(t.x1, t.y1), t.fx),
               t.fy);
}

BoolMap::BoolMap(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BoolMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

}  // namespace flowgen
