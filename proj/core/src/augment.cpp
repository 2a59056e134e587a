#include "flowgen/augment.hpp"

#include <algorithm>
#include <cmath>

#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

bool ColorAugment::is_identity() const noexcept {
  return brightness_offset == 0.0 && contrast_gain == 1.0 && channel_gain[0] == 1.0 && channel_gain[1] == 1.0 &&
         channel_gain[2] == 1.0 && noise_std == 0.0;
}

void AugmentMode::validate() const {
  if (color_between && !color_both) throw Error(ErrorCode::ConfigError, "augment.color_between needs augment.color_both");
  if (geom_between && !geom_both) throw Error(ErrorCode::ConfigError, "augment.geom_between needs augment.geom_both");
}

ImageBuffer apply_color(const ImageBuffer& img, const ColorAugment& aug, Rng& rng) {
  ImageBuffer out = img;
  const int channels = img.channels();
  // contrast * (gain * v - 0.5) + 0.5 + brightness, arranged so that the
  // identity parameters reproduce v exactly.
  const double offset = 0.5 - 0.5 * aug.contrast_gain + aug.brightness_offset;
  auto data = out.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int c = channels == 3 ? static_cast<int>(i % 3) : 0;
    double v = aug.contrast_gain * aug.channel_gain[static_cast<std::size_t>(c)] * data[i] + offset;
    if (aug.noise_std > 0.0) v += rng.normal(0.0, aug.noise_std);
    data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

namespace {

bool in_frame(Vec2 p, int w, int h) noexcept { return p.x >= 0.0 && p.x <= w && p.y >= 0.0 && p.y <= h; }

void resample(const ImageBuffer& src, ImageBuffer& dst, int x, int y, Vec2 p) noexcept {
  for (int c = 0; c < src.channels(); ++c) dst.at(x, y, c) = src.sample(p.x - 0.5, p.y - 0.5, c);
}

}  // namespace

GeomResult apply_geom(const ImageBuffer& frame1, const ImageBuffer& frame2, const FlowField& flow,
                      const GeomAugment& aug, FlowInterp interp) {
  const int w = flow.width();
  const int h = flow.height();
  if (frame1.width() != w || frame1.height() != h || frame2.width() != w || frame2.height() != h ||
      frame1.channels() != frame2.channels()) {
    throw Error(ErrorCode::DimensionMismatch, "frames and flow must share dimensions");
  }
  const Affine2 total = compose(aug.incremental, aug.shared);
  const Affine2 inv_shared = invert(aug.shared);
  const Affine2 inv_total = invert(total);
  if (aug.shared.is_identity() && aug.incremental.is_identity()) {
    return {frame1, frame2, flow, BoolMap(w, h, true)};
  }

  GeomResult out{ImageBuffer(w, h, frame1.channels()), ImageBuffer(w, h, frame2.channels()), FlowField(w, h),
                 BoolMap(w, h, true)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 xc{x + 0.5, y + 0.5};
      const Vec2 p1 = inv_shared.apply(xc);
      const Vec2 p2 = inv_total.apply(xc);
      resample(frame1, out.frame1, x, y, p1);
      resample(frame2, out.frame2, x, y, p2);
      out.valid.set(x, y, in_frame(p1, w, h) && in_frame(p2, w, h));

      double fu = 0.0;
      double fv = 0.0;
      if (interp == FlowInterp::Nearest) {
        const int ix = std::clamp(static_cast<int>(std::floor(p1.x)), 0, w - 1);
        const int iy = std::clamp(static_cast<int>(std::floor(p1.y)), 0, h - 1);
        fu = flow.u(ix, iy);
        fv = flow.v(ix, iy);
      } else {
        flow.sample(p1.x - 0.5, p1.y - 0.5, fu, fv);
      }
      // total(p1 + f) - xc, split so that translations relabel exactly.
      const Vec2 moved = total.apply_linear({fu, fv});
      const Vec2 base = total.apply(p1) - xc;
      out.flow.u(x, y) = static_cast<float>(moved.x + base.x);
      out.flow.v(x, y) = static_cast<float>(moved.y + base.y);
    }
  }
  return out;
}

ColorAugment draw_color(const AugmentRanges& r, Rng& rng) {
  ColorAugment a;
  a.brightness_offset = rng.uniform(-r.brightness, r.brightness);
  a.contrast_gain = rng.uniform(r.contrast_min, r.contrast_max);
  for (double& g : a.channel_gain) g = rng.uniform(r.gain_min, r.gain_max);
  a.noise_std = rng.uniform(0.0, r.noise_max);
  return a;
}

ColorAugment draw_color_delta(const ColorAugment& base, const AugmentRanges& r, Rng& rng) {
  const double f = r.between_fraction;
  ColorAugment a = base;
  a.brightness_offset += rng.uniform(-f * r.brightness, f * r.brightness);
  const double log_contrast = 0.5 * std::log(r.contrast_max / r.contrast_min);
  a.contrast_gain *= std::exp(rng.uniform(-f * log_contrast, f * log_contrast));
  const double gain_half = 0.5 * (r.gain_max - r.gain_min);
  for (double& g : a.channel_gain) g *= 1.0 + rng.uniform(-f * gain_half, f * gain_half);
  return a;
}

namespace {

Affine2 center_transform(double dx, double dy, double rot_deg, double log_scale, int width, int height) {
  const Affine2 linear = compose(Affine2::rotation_deg(rot_deg), Affine2::scaling(std::exp(log_scale)));
  return compose(Affine2::translation(dx, dy), Affine2::about({0.5 * width, 0.5 * height}, linear));
}

}  // namespace

Affine2 draw_geom(const AugmentRanges& r, int width, int height, Rng& rng) {
  const double dx = rng.uniform(-r.shift_fraction, r.shift_fraction) * width;
  const double dy = rng.uniform(-r.shift_fraction, r.shift_fraction) * height;
  const double rot = rng.uniform(-r.rotation_deg, r.rotation_deg);
  const double ls = rng.uniform(std::log(r.scale_min), std::log(r.scale_max));
  return center_transform(dx, dy, rot, ls, width, height);
}

Affine2 draw_geom_delta(const AugmentRanges& r, int width, int height, Rng& rng) {
  const double f = r.between_fraction;
  const double dx = rng.uniform(-f * r.shift_fraction, f * r.shift_fraction) * width;
  const double dy = rng.uniform(-f * r.shift_fraction, f * r.shift_fraction) * height;
  const double rot = rng.uniform(-f * r.rotation_deg, f * r.rotation_deg);
  const double half_log = 0.5 * std::log(r.scale_max / r.scale_min);
  const double ls = rng.uniform(-f * half_log, f * half_log);
  return center_transform(dx, dy, rot, ls, width, height);
}

AugmentedSample augment_sample(const ImageBuffer& frame1, const ImageBuffer& frame2, const FlowField& flow,
                               const OcclusionMask& occ, const AugmentMode& mode, const AugmentRanges& ranges,
                               FlowInterp interp, Rng& rng) {
  mode.validate();
  const int w = flow.width();
  const int h = flow.height();
  if (!mode.any()) return {frame1, frame2, flow, occ, BoolMap(w, h, true)};

  Rng geom_rng = rng.fork("geom");
  Rng geom_delta_rng = rng.fork("geom-delta");
  Rng color_rng = rng.fork("color");
  Rng color_delta_rng = rng.fork("color-delta");
  Rng noise1 = rng.fork("noise1");
  Rng noise2 = rng.fork("noise2");

  GeomAugment g;
  if (mode.geom_both) g.shared = draw_geom(ranges, w, h, geom_rng);
  if (mode.geom_between) g.incremental = draw_geom_delta(ranges, w, h, geom_delta_rng);
  GeomResult geo = apply_geom(frame1, frame2, flow, g, interp);

  AugmentedSample out;
  out.flow = std::move(geo.flow);
  out.valid = std::move(geo.valid);
  out.occ = OcclusionMask(w, h);
  const Affine2 inv_shared = invert(g.shared);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 p = inv_shared.apply({x + 0.5, y + 0.5});
      const int ix = std::clamp(static_cast<int>(std::floor(p.x)), 0, w - 1);
      const int iy = std::clamp(static_cast<int>(std::floor(p.y)), 0, h - 1);
      const double tx = x + 0.5 + out.flow.u(x, y);
      const double ty = y + 0.5 + out.flow.v(x, y);
      const bool outside = !(tx >= 0.0 && tx < w && ty >= 0.0 && ty < h);
      out.occ.set(x, y, occ.get(ix, iy) || outside);
    }
  }

  if (mode.color_both) {
    const ColorAugment c1 = draw_color(ranges, color_rng);
    const ColorAugment c2 = mode.color_between ? draw_color_delta(c1, ranges, color_delta_rng) : c1;
    out.frame1 = apply_color(geo.frame1, c1, noise1);
    out.frame2 = apply_color(geo.frame2, c2, noise2);
  } else {
    out.frame1 = std::move(geo.frame1);
    out.frame2 = std::move(geo.frame2);
  }
  return out;
}

}  // namespace flowgen
