#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "flowgen/config.hpp"
#include "flowgen/geometry.hpp"
#include "flowgen/shapes.hpp"
#include "flowgen/textures.hpp"

namespace flowgen {

/// One textured layer. The background is a layer without a shape.
struct LayerSpec {
  std::optional<ShapeSpec> shape;
  std::size_t texture = 0;  // index into SceneSpec::textures
  /// Layer-local point that maps to the texture center pixel.
  Vec2 texture_origin;
  /// Layer-local -> frame 1.
  Affine2 placement;
  /// The layer's own frame-to-frame motion, in frame coordinates.
  WarpMap own_motion;
  /// layer_motion(background motion, own_motion); equal to own_motion for the
  /// background itself.
  WarpMap motion;
};

/// Background plus z-ordered layers (later layers occlude earlier ones).
struct SceneSpec {
  int width = 0;
  int height = 0;
  std::vector<std::shared_ptr<const Texture>> textures;
  LayerSpec background;
  std::vector<LayerSpec> layers;
};

/// Texture-image index coordinates of a layer-local point.
Vec2 texture_coords(const LayerSpec& layer, const Texture& texture, Vec2 local) noexcept;

/// Fraction of a layer's placed footprint that lies inside the frame,
/// estimated on a 24 x 24 grid over the shape's local bounds.
double footprint_in_frame(const ShapeSpec& shape, const Affine2& placement, int width, int height);

/// Samples a scene for `sample_index`. Deterministic in (config, index);
/// the photo pool is only consulted for the photo texture family. Throws
/// PlacementFailure after 100 unsuccessful placement attempts of one object.
SceneSpec sample_scene(const GenConfig& config, std::uint64_t sample_index,
                       const std::vector<Texture>* photo_pool = nullptr);

/// Same as above with an explicit per-sample seed.
SceneSpec sample_scene_seeded(const GenConfig& config, std::uint64_t seed,
                              const std::vector<Texture>* photo_pool = nullptr);

/// Draws a motion about `center` from `dist`. The deformation grid spans
/// `domain` with grid_w x grid_h cells.
WarpMap sample_motion(const MotionDistribution& dist, Vec2 center, const Box2& domain, int grid_w, int grid_h,
                      Rng& rng);

}  // namespace flowgen
