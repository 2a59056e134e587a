#include "flowgen/scene.hpp"

#include <algorithm>
#include <cmath>

#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

namespace {

constexpr int kMaxPlacementAttempts = 100;
constexpr double kMinFootprintInFrame = 0.25;
constexpr int kTexturePad = 16;
constexpr int kMaxTextureSide = 8192;
// Control-grid amplitude cap relative to the smaller cell side. Keeps every
// deformed warp a homeomorphism, so inverse lookups are well defined.
constexpr double kDeformCellFraction = 0.2;

std::shared_ptr<const Texture> make_texture(const GenConfig& config, int width, int height, Rng& rng,
                                            const std::vector<Texture>* pool) {
  width = std::clamp(width, kMinTextureSize, kMaxTextureSide);
  height = std::clamp(height, kMinTextureSize, kMaxTextureSide);
  switch (config.texture) {
    case TextureFamily::Plasma: {
      PlasmaParams p;
      p.sites = config.plasma_sites;
      return std::make_shared<const Texture>(gen_plasma(width, height, rng, p));
    }
    case TextureFamily::Clouds:
      return std::make_shared<const Texture>(gen_clouds(width, height, config.clouds_octaves, rng));
    case TextureFamily::Photo:
      if (pool == nullptr || pool->empty()) throw Error(ErrorCode::EmptyPool, "photo textures need a loaded pool");
      return std::make_shared<const Texture>(photo_crop(*pool, width, height, rng));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown texture family");
}

Affine2 placement_transform(Vec2 position, double rotation_deg, double scale) {
  const Affine2 linear = compose(Affine2::rotation_deg(rotation_deg), Affine2::scaling(scale));
  return compose(Affine2::translation(position.x, position.y), linear);
}

Box2 placed_bounds(const Box2& local, const Affine2& placement) {
  Box2 out{placement.apply(local.min), placement.apply(local.min)};
  out.expand(placement.apply({local.max.x, local.min.y}));
  out.expand(placement.apply({local.min.x, local.max.y}));
  out.expand(placement.apply(local.max));
  return out;
}

}  // namespace

Vec2 texture_coords(const LayerSpec& layer, const Texture& texture, Vec2 local) noexcept {
  return {local.x - layer.texture_origin.x + 0.5 * texture.image.width() - 0.5,
          local.y - layer.texture_origin.y + 0.5 * texture.image.height() - 0.5};
}

double footprint_in_frame(const ShapeSpec& shape, const Affine2& placement, int width, int height) {
  constexpr int kGrid = 24;
  const Box2 b = shape.bounds();
  int inside = 0;
  int in_frame = 0;
  for (int j = 0; j < kGrid; ++j) {
    for (int i = 0; i < kGrid; ++i) {
      const Vec2 local{b.min.x + (i + 0.5) / kGrid * b.width(), b.min.y + (j + 0.5) / kGrid * b.height()};
      if (!shape.contains(local)) continue;
      ++inside;
      const Vec2 p = placement.apply(local);
      if (p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height) ++in_frame;
    }
  }
  return inside == 0 ? 0.0 : static_cast<double>(in_frame) / inside;
}

WarpMap sample_motion(const MotionDistribution& dist, Vec2 center, const Box2& domain, int grid_w, int grid_h,
                      Rng& rng) {
  // Every parameter is drawn whether or not its component is enabled.
  const double tx = dist.translation.sample(rng);
  const double ty = dist.translation.sample(rng);
  const double rot = dist.rotation_deg.sample(rng);
  const double log_s = dist.log_scale.sample(rng);
  const double amp_draw = std::abs(dist.deform.sample(rng));
  Rng deform_rng = rng.fork("deform");

  Affine2 linear = Affine2::identity();
  if (dist.rotation_enabled) linear = Affine2::rotation_deg(rot);
  if (dist.scaling_enabled) linear = compose(linear, Affine2::scaling(std::exp(log_s)));
  Affine2 affine = Affine2::about(center, linear);
  if (dist.translation_enabled) affine = compose(Affine2::translation(tx, ty), affine);

  if (!dist.deformation_enabled) return WarpMap(affine);
  const double cell = std::min(domain.width() / grid_w, domain.height() / grid_h);
  const double amplitude = std::min(amp_draw, kDeformCellFraction * cell);
  if (!(amplitude > 0.0)) return WarpMap(affine);
  auto field = std::make_shared<const DeformField>(DeformField::random(domain, grid_w, grid_h, amplitude, deform_rng));
  return WarpMap(affine, std::move(field));
}

SceneSpec sample_scene(const GenConfig& config, std::uint64_t sample_index, const std::vector<Texture>* photo_pool) {
  return sample_scene_seeded(config, sample_seed(config.seed, sample_index), photo_pool);
}

SceneSpec sample_scene_seeded(const GenConfig& config, std::uint64_t seed, const std::vector<Texture>* photo_pool) {
  config.validate();
  const Rng root(seed);
  SceneSpec scene;
  scene.width = config.width;
  scene.height = config.height;
  const Vec2 frame_center{0.5 * config.width, 0.5 * config.height};
  const Box2 frame{{0.0, 0.0}, {static_cast<double>(config.width), static_cast<double>(config.height)}};

  // Background.
  {
    Rng place_rng = root.fork("background-placement");
    Rng motion_rng = root.fork("background-motion");
    Rng texture_rng = root.fork("background-texture");
    const double rot = config.background_placement.rotation_deg.sample(place_rng);
    const double scale = std::exp(config.background_placement.log_scale.sample(place_rng));
    LayerSpec& bg = scene.background;
    bg.placement = placement_transform(frame_center, rot, scale);
    bg.own_motion = sample_motion(config.background_motion, frame_center, frame, 4, 3, motion_rng);
    bg.motion = bg.own_motion;

    // The texture must cover the frame and its pullback from frame 2.
    const Affine2 inv = invert(bg.placement);
    double reach = 0.0;
    constexpr int kEdgeSamples = 32;
    for (int e = 0; e < 4 * kEdgeSamples; ++e) {
      const double t = static_cast<double>(e % kEdgeSamples) / kEdgeSamples;
      const int side = e / kEdgeSamples;
      const Vec2 q = side == 0   ? Vec2{t * config.width, 0.0}
                     : side == 1 ? Vec2{static_cast<double>(config.width), t * config.height}
                     : side == 2 ? Vec2{(1.0 - t) * config.width, static_cast<double>(config.height)}
                                 : Vec2{0.0, (1.0 - t) * config.height};
      reach = std::max(reach, norm(inv.apply(q)));
      reach = std::max(reach, norm(inv.apply(bg.motion.apply_inverse(q))));
    }
    const int side = 2 * static_cast<int>(std::ceil(reach)) + 2 * kTexturePad;
    scene.textures.push_back(make_texture(config, side, side, texture_rng, photo_pool));
    bg.texture = 0;
    bg.texture_origin = {0.0, 0.0};
  }

  Rng count_rng = root.fork("object-count");
  const auto n_objects = static_cast<int>(count_rng.uniform_int(config.min_objects, config.max_objects));
  scene.layers.reserve(static_cast<std::size_t>(n_objects));

  for (int i = 0; i < n_objects; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    Rng shape_rng = root.fork("object-shape", idx);
    Rng place_rng = root.fork("object-placement", idx);
    Rng motion_rng = root.fork("object-motion", idx);
    Rng texture_rng = root.fork("object-texture", idx);

    LayerSpec layer;
    layer.shape = sample_shape(config.shape_classes, shape_rng, config.shape);
    const ShapeSpec& shape = *layer.shape;

    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      const double rot = config.object_placement.rotation_deg.sample(place_rng);
      const double scale = std::exp(config.object_placement.log_scale.sample(place_rng));
      const Vec2 pos{place_rng.uniform(0.0, config.width), place_rng.uniform(0.0, config.height)};
      // The shape center lands on `pos`.
      const Affine2 p = compose(placement_transform(pos, rot, scale), Affine2::translation(-shape.center.x, -shape.center.y));
      if (footprint_in_frame(shape, p, config.width, config.height) >= kMinFootprintInFrame) {
        layer.placement = p;
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::PlacementFailure,
                  "object " + std::to_string(i) + " could not be placed with 25% of its footprint in frame");
    }

    const Box2 local = shape.bounds();
    const Box2 placed_box = placed_bounds(local, layer.placement);
    layer.own_motion =
        sample_motion(config.object_motion, layer.placement.apply(shape.center), placed_box, 3, 3, motion_rng);
    layer.motion = layer_motion(scene.background.motion, layer.own_motion);

    const int tw = static_cast<int>(std::ceil(local.width())) + 8;
    const int th = static_cast<int>(std::ceil(local.height())) + 8;
    layer.texture = scene.textures.size();
    layer.texture_origin = local.center();
    scene.textures.push_back(make_texture(config, tw, th, texture_rng, photo_pool));
    scene.layers.push_back(std::move(layer));
  }
  return scene;
}

}  // namespace flowgen
