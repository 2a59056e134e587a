#include "flowgen/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "flowgen/error.hpp"

namespace flowgen {

namespace {

// Frame-2 bounding boxes come from sampled boundary points; the pad absorbs
// curvature between samples.
constexpr double kFrame2Pad = 2.0;
constexpr int kBoundarySamples = 16;

/// Per-layer lookup data shared by the frame-1 and frame-2 passes.
struct PreparedLayer {
  const LayerSpec* spec = nullptr;
  const Texture* texture = nullptr;
  Affine2 inv_placement;
  /// inv_placement o motion^-1, valid when the motion is affine.
  Affine2 inv_frame2;
  bool frame2_affine = true;
  Box2 box1;  // frame-1 bounds of the footprint
  Box2 box2;  // frame-2 bounds of the footprint

  bool contains1(Vec2 q) const noexcept {
    return q.x >= box1.min.x && q.x <= box1.max.x && q.y >= box1.min.y && q.y <= box1.max.y &&
           spec->shape->contains(inv_placement.apply(q));
  }

  Vec2 local2(Vec2 q) const {
    return frame2_affine ? inv_frame2.apply(q) : inv_placement.apply(spec->motion.apply_inverse(q));
  }

  bool in_box2(Vec2 q) const noexcept {
    return q.x >= box2.min.x && q.x <= box2.max.x && q.y >= box2.min.y && q.y <= box2.max.y;
  }

  bool contains2(Vec2 q) const { return in_box2(q) && spec->shape->contains(local2(q)); }

  void color_at_local(Vec2 local, double out[3]) const noexcept {
    const Vec2 t = texture_coords(*spec, *texture, local);
    float v[3];
    texture->image.sample_all(t.x, t.y, v);
    for (int c = 0; c < 3; ++c) out[c] = v[c];
  }
};

struct Prepared {
  PreparedLayer background;
  std::vector<PreparedLayer> layers;
};

PreparedLayer prepare_layer(const SceneSpec& scene, const LayerSpec& layer) {
  if (layer.texture >= scene.textures.size() || !scene.textures[layer.texture]) {
    throw Error(ErrorCode::MissingTexture, "layer texture index " + std::to_string(layer.texture) + " is missing");
  }
  PreparedLayer p;
  p.spec = &layer;
  p.texture = scene.textures[layer.texture].get();
  p.inv_placement = invert(layer.placement);
  p.frame2_affine = !layer.motion.has_deform();
  if (p.frame2_affine) p.inv_frame2 = compose(p.inv_placement, invert(layer.motion.affine_part()));
  if (!layer.shape) return p;

  const Box2 local = layer.shape->bounds();
  const Vec2 corners[4] = {local.min, {local.max.x, local.min.y}, local.max, {local.min.x, local.max.y}};
  bool first = true;
  for (int e = 0; e < 4; ++e) {
    for (int s = 0; s < kBoundarySamples; ++s) {
      const double t = static_cast<double>(s) / kBoundarySamples;
      const Vec2 l = corners[e] + t * (corners[(e + 1) % 4] - corners[e]);
      const Vec2 q1 = layer.placement.apply(l);
      const Vec2 q2 = layer.motion.apply(q1);
      if (first) {
        p.box1 = {q1, q1};
        p.box2 = {q2, q2};
        first = false;
      } else {
        p.box1.expand(q1);
        p.box2.expand(q2);
      }
    }
  }
  // Rounding margin for frame 1, curvature margin for frame 2.
  p.box1.min = p.box1.min - Vec2{1e-6, 1e-6};
  p.box1.max = p.box1.max + Vec2{1e-6, 1e-6};
  p.box2.min = p.box2.min - Vec2{kFrame2Pad, kFrame2Pad};
  p.box2.max = p.box2.max + Vec2{kFrame2Pad, kFrame2Pad};
  return p;
}

Prepared prepare(const SceneSpec& scene) {
  Prepared p;
  p.background = prepare_layer(scene, scene.background);
  p.layers.reserve(scene.layers.size());
  for (const LayerSpec& l : scene.layers) {
    if (!l.shape) throw Error(ErrorCode::InvalidArgument, "object layers need a shape");
    p.layers.push_back(prepare_layer(scene, l));
  }
  return p;
}

/// Layers whose box (frame 1 or 2) intersects the pixel row band, per row.
std::vector<std::vector<int>> row_candidates(const Prepared& p, int height, bool frame2) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(height));
  for (int i = static_cast<int>(p.layers.size()) - 1; i >= 0; --i) {
    const Box2& b = frame2 ? p.layers[static_cast<std::size_t>(i)].box2 : p.layers[static_cast<std::size_t>(i)].box1;
    const int y0 = std::max(0, static_cast<int>(std::floor(b.min.y)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(b.max.y)));
    for (int y = y0; y <= y1; ++y) rows[static_cast<std::size_t>(y)].push_back(i);
  }
  return rows;
}

bool overlaps_pixel(const Box2& b, int x) noexcept { return b.max.x >= x && b.min.x <= x + 1.0; }

/// Frame-1 color and label of one pixel. `cands` lists layer indices top-down.
int shade_frame1(const Prepared& p, const std::vector<int>& cands, int x, int y, const std::vector<double>& offs,
                 double color[3]) {
  const int ss = static_cast<int>(offs.size());
  const int n = ss * ss;
  const int half = n / 2;
  std::array<char, 64> covered{};
  int uncovered = n;
  int label = LabelMap::kBackgroundLabel;
  bool label_known = false;
  double acc[3] = {0.0, 0.0, 0.0};
  double c[3];

  for (int li : cands) {
    const PreparedLayer& layer = p.layers[static_cast<std::size_t>(li)];
    if (!overlaps_pixel(layer.box1, x)) continue;
    if (uncovered == 0 && label_known) break;
    int count = 0;
    for (int s = 0; s < n; ++s) {
      if (covered[static_cast<std::size_t>(s)] && label_known) continue;
      const Vec2 q{x + offs[static_cast<std::size_t>(s % ss)], y + offs[static_cast<std::size_t>(s / ss)]};
      if (q.x < layer.box1.min.x || q.x > layer.box1.max.x || q.y < layer.box1.min.y || q.y > layer.box1.max.y) {
        continue;
      }
      const Vec2 local = layer.inv_placement.apply(q);
      if (!layer.spec->shape->contains(local)) continue;
      ++count;
      if (!covered[static_cast<std::size_t>(s)]) {
        covered[static_cast<std::size_t>(s)] = 1;
        --uncovered;
        layer.color_at_local(local, c);
        for (int k = 0; k < 3; ++k) acc[k] += c[k];
      }
    }
    if (!label_known && count > half) {
      label = li;
      label_known = true;
    }
  }
  if (uncovered > 0) {
    for (int s = 0; s < n; ++s) {
      if (covered[static_cast<std::size_t>(s)]) continue;
      const Vec2 q{x + offs[static_cast<std::size_t>(s % ss)], y + offs[static_cast<std::size_t>(s / ss)]};
      p.background.color_at_local(p.background.inv_placement.apply(q), c);
      for (int k = 0; k < 3; ++k) acc[k] += c[k];
    }
  }
  for (int k = 0; k < 3; ++k) color[k] = acc[k] / n;
  return label;
}

void shade_frame2(const Prepared& p, const std::vector<int>& cands, int x, int y, const std::vector<double>& offs,
                  double color[3]) {
  const int ss = static_cast<int>(offs.size());
  const int n = ss * ss;
  double acc[3] = {0.0, 0.0, 0.0};
  double c[3];
  std::array<const PreparedLayer*, 64> near{};
  std::size_t n_near = 0;
  bool use_near = true;
  for (int li : cands) {
    const PreparedLayer& layer = p.layers[static_cast<std::size_t>(li)];
    if (!overlaps_pixel(layer.box2, x)) continue;
    if (n_near == near.size()) {
      // More overlapping layers than fit; fall back to the full list.
      use_near = false;
      break;
    }
    near[n_near++] = &layer;
  }
  for (int s = 0; s < n; ++s) {
    const Vec2 q{x + offs[static_cast<std::size_t>(s % ss)], y + offs[static_cast<std::size_t>(s / ss)]};
    bool hit = false;
    const std::size_t count = use_near ? n_near : cands.size();
    for (std::size_t k = 0; k < count; ++k) {
      const PreparedLayer& layer = use_near ? *near[k] : p.layers[static_cast<std::size_t>(cands[k])];
      if (!layer.in_box2(q)) continue;
      const Vec2 local = layer.local2(q);
      if (!layer.spec->shape->contains(local)) continue;
      layer.color_at_local(local, c);
      hit = true;
      break;
    }
    if (!hit) p.background.color_at_local(p.background.local2(q), c);
    for (int k = 0; k < 3; ++k) acc[k] += c[k];
  }
  for (int k = 0; k < 3; ++k) color[k] = acc[k] / n;
}

int topmost_in_frame2_above(const Prepared& p, Vec2 q, int above) {
  for (int i = static_cast<int>(p.layers.size()) - 1; i > above; --i) {
    if (p.layers[static_cast<std::size_t>(i)].contains2(q)) return i;
  }
  return LabelMap::kBackgroundLabel;
}

}  // namespace

RenderedPair render_pair(const SceneSpec& scene, int supersample) {
  check_supersample(supersample);
  if (scene.width <= 0 || scene.height <= 0) throw Error(ErrorCode::InvalidArgument, "scene has no frame size");
  const Prepared p = prepare(scene);
  const std::vector<double> offs = subsample_offsets(supersample);
  const int w = scene.width;
  const int h = scene.height;

  RenderedPair out{ImageBuffer(w, h, 3), ImageBuffer(w, h, 3), FlowField(w, h), OcclusionMask(w, h),
                   LabelMap{w, h, std::vector<int>(static_cast<std::size_t>(w) * h, LabelMap::kBackgroundLabel)}};

  const auto rows1 = row_candidates(p, h, false);
  const auto rows2 = row_candidates(p, h, true);
  double color[3];
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int label = shade_frame1(p, rows1[static_cast<std::size_t>(y)], x, y, offs, color);
      for (int k = 0; k < 3; ++k) out.frame1.at(x, y, k) = static_cast<float>(color[k]);
      out.labels.labels[static_cast<std::size_t>(y) * w + x] = label;

      const PreparedLayer& owner =
          label == LabelMap::kBackgroundLabel ? p.background : p.layers[static_cast<std::size_t>(label)];
      const Vec2 center{x + 0.5, y + 0.5};
      const Vec2 f = flow_at(owner.spec->motion, center);
      const Vec2 target = center + f;
      out.flow.u(x, y) = static_cast<float>(f.x);
      out.flow.v(x, y) = static_cast<float>(f.y);
      const bool outside = !(target.x >= 0.0 && target.x < w && target.y >= 0.0 && target.y < h);
      out.occ.set(x, y, outside || topmost_in_frame2_above(p, target, label) != LabelMap::kBackgroundLabel);

      shade_frame2(p, rows2[static_cast<std::size_t>(y)], x, y, offs, color);
      for (int k = 0; k < 3; ++k) out.frame2.at(x, y, k) = static_cast<float>(color[k]);
    }
  }
  return out;
}

int topmost_layer(const SceneSpec& scene, int x, int y, int supersample) {
  check_supersample(supersample);
  const Prepared p = prepare(scene);
  std::vector<int> cands;
  for (int i = static_cast<int>(p.layers.size()) - 1; i >= 0; --i) cands.push_back(i);
  double color[3];
  return shade_frame1(p, cands, x, y, subsample_offsets(supersample), color);
}

int topmost_layer_at(const SceneSpec& scene, Vec2 q) {
  for (int i = static_cast<int>(scene.layers.size()) - 1; i >= 0; --i) {
    const LayerSpec& l = scene.layers[static_cast<std::size_t>(i)];
    if (l.shape && l.shape->contains(invert(l.placement).apply(q))) return i;
  }
  return LabelMap::kBackgroundLabel;
}

int topmost_layer_frame2(const SceneSpec& scene, Vec2 q) {
  const Prepared p = prepare(scene);
  return topmost_in_frame2_above(p, q, -1);
}

}  // namespace flowgen
