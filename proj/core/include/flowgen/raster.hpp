#pragma once

#include "flowgen/image.hpp"
#include "flowgen/scene.hpp"

namespace flowgen {

struct RenderedPair {
  ImageBuffer frame1;
  ImageBuffer frame2;
  FlowField flow;
  OcclusionMask occ;
  /// Frame-1 layer label per pixel (LabelMap::kBackgroundLabel for the
  /// background).
  LabelMap labels;
};

/// Composites frame 1 (placements) and frame 2 (motion-composed placements)
/// with coverage antialiasing at supersample^2 subsamples per pixel, and
/// derives flow and occlusion from the crisp frame-1 labels. Throws
/// MissingTexture for a layer whose texture index is out of range.
RenderedPair render_pair(const SceneSpec& scene, int supersample);

/// Highest layer whose frame-1 coverage of pixel (x, y) exceeds 0.5, or
/// LabelMap::kBackgroundLabel.
int topmost_layer(const SceneSpec& scene, int x, int y, int supersample);

/// Highest layer containing the continuous frame-1 point p (no
/// antialiasing), or LabelMap::kBackgroundLabel.
int topmost_layer_at(const SceneSpec& scene, Vec2 p);

/// Highest layer containing the continuous frame-2 point q, or the
/// background label.
int topmost_layer_frame2(const SceneSpec& scene, Vec2 q);

}  // namespace flowgen
