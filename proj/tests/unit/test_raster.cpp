#include <doctest.h>

#include <cmath>
#include <memory>

#include "flowgen/config.hpp"
#include "flowgen/error.hpp"
#include "flowgen/raster.hpp"
#include "flowgen/rng.hpp"
#include "flowgen/scene.hpp"
#include "test_support.hpp"

using namespace flowgen;

namespace {

std::shared_ptr<const Texture> flat_texture(float r, float g, float b, int size = 128) {
  auto t = std::make_shared<Texture>();
  t->image = ImageBuffer(size, size, 3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      t->image.at(x, y, 0) = r;
      t->image.at(x, y, 1) = g;
      t->image.at(x, y, 2) = b;
    }
  }
  return t;
}

std::shared_ptr<const Texture> ramp_texture(int size) {
  auto t = std::make_shared<Texture>();
  t->image = ImageBuffer(size, size, 3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      t->image.at(x, y, 0) = static_cast<float>(x) / size;
      t->image.at(x, y, 1) = static_cast<float>(y) / size;
      t->image.at(x, y, 2) = static_cast<float>((x * 7 + y * 13) % 32) / 32.0f;
    }
  }
  return t;
}

ShapeSpec square(double half) {
  ShapeSpec s;
  s.shape_class = ShapeClass::Box;
  s.vertices = {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
  return s;
}

LayerSpec object(const ShapeSpec& shape, std::size_t tex, Vec2 pos, const WarpMap& own, const WarpMap& bg) {
  LayerSpec l;
  l.shape = shape;
  l.texture = tex;
  l.placement = Affine2::translation(pos.x, pos.y);
  l.own_motion = own;
  l.motion = layer_motion(bg, own);
  return l;
}

/// Background ramp plus one flat red square, both translating.
SceneSpec two_layer_scene(Vec2 bg_shift, Vec2 obj_shift) {
  SceneSpec s;
  s.width = 96;
  s.height = 64;
  s.textures = {ramp_texture(256), flat_texture(0.9f, 0.1f, 0.2f)};
  const WarpMap bg(Affine2::translation(bg_shift.x, bg_shift.y));
  s.background.texture = 0;
  s.background.placement = Affine2::identity();
  s.background.texture_origin = {48, 32};
  s.background.own_motion = bg;
  s.background.motion = bg;
  s.layers.push_back(object(square(12), 1, {40, 30}, WarpMap(Affine2::translation(obj_shift.x, obj_shift.y)), bg));
  return s;
}

}  // namespace

TEST_CASE("fully covered pixels carry the layer color and motion exactly") {
  const SceneSpec s = two_layer_scene({2, -1}, {5, 3});
  const RenderedPair r = render_pair(s, 4);
  const Vec2 layer_flow = flow_at(s.layers[0].motion, {0, 0});
  const Vec2 bg_flow = flow_at(s.background.motion, {0, 0});
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const bool inside = x >= 28 && x < 52 && y >= 18 && y < 42;
      const bool touches = x >= 27 && x < 53 && y >= 17 && y < 43;
      if (inside) {
        CHECK(r.labels.at(x, y) == 0);
        CHECK(r.frame1.at(x, y, 0) == 0.9f);
        CHECK(r.frame1.at(x, y, 1) == 0.1f);
        CHECK(r.flow.u(x, y) == static_cast<float>(layer_flow.x));
        CHECK(r.flow.v(x, y) == static_cast<float>(layer_flow.y));
      } else if (!touches) {
        CHECK(r.labels.at(x, y) == LabelMap::kBackgroundLabel);
        CHECK(r.flow.u(x, y) == static_cast<float>(bg_flow.x));
        CHECK(r.flow.v(x, y) == static_cast<float>(bg_flow.y));
      }
    }
  }
  CHECK(layer_flow == Vec2{7, 2});
}

TEST_CASE("antialiased edges blend colors by coverage") {
  SceneSpec s = two_layer_scene({0, 0}, {0, 0});
  s.textures[0] = flat_texture(0, 0, 0);
  // Square edge at x = 28.25: pixel 28 is 3/4 covered.
  s.layers[0].placement = Affine2::translation(40.25, 30);
  const RenderedPair r = render_pair(s, 4);
  CHECK(r.frame1.at(28, 30, 0) == doctest::Approx(0.9 * 0.75).epsilon(1e-6));
  CHECK(r.labels.at(28, 30) == 0);
  CHECK(r.labels.at(27, 30) == LabelMap::kBackgroundLabel);
}

TEST_CASE("integer translations reproduce frame 1 in frame 2") {
  const SceneSpec s = two_layer_scene({3, 2}, {-6, 4});
  const RenderedPair r = render_pair(s, 4);
  int checked = 0;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      if (r.occ.get(x, y)) continue;
      const int tx = x + static_cast<int>(r.flow.u(x, y));
      const int ty = y + static_cast<int>(r.flow.v(x, y));
      // Skip the antialiased rim, where colors mix.
      bool rim = false;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = std::clamp(x + dx, 0, s.width - 1);
          const int yy = std::clamp(y + dy, 0, s.height - 1);
          rim = rim || r.labels.at(xx, yy) != r.labels.at(x, y);
        }
      if (rim) continue;
      ++checked;
      for (int c = 0; c < 3; ++c) CHECK(r.frame2.at(tx, ty, c) == doctest::Approx(r.frame1.at(x, y, c)).epsilon(1e-6));
    }
  }
  CHECK(checked > 3000);
}

TEST_CASE("out-of-frame targets are occluded") {
  const SceneSpec s = two_layer_scene({10, 0}, {0, 0});
  const RenderedPair r = render_pair(s, 2);
  for (int y = 0; y < s.height; ++y) {
    for (int x = s.width - 10; x < s.width; ++x) CHECK(r.occ.get(x, y));
  }
  CHECK_FALSE(r.occ.get(5, 5));
}

TEST_CASE("a layer moving over a lower layer occludes it") {
  SceneSpec s;
  s.width = 100;
  s.height = 60;
  s.textures = {flat_texture(0.2f, 0.2f, 0.2f), flat_texture(1, 0, 0), flat_texture(0, 0, 1)};
  s.background.texture = 0;
  s.background.own_motion = WarpMap();
  s.background.motion = WarpMap();
  // Lower square at x in [20, 40) stays; upper square at [60, 80) moves left by 35.
  s.layers.push_back(object(square(10), 1, {30, 30}, WarpMap(), WarpMap()));
  s.layers.push_back(object(square(10), 2, {70, 30}, WarpMap(Affine2::translation(-35, 0)), WarpMap()));
  const RenderedPair r = render_pair(s, 4);
  for (int y = 21; y < 39; ++y) {
    // Oracle: lower pixel x is covered iff its (static) target lies in the
    // moved upper square [25, 45) x [20, 40).
    for (int x = 21; x < 39; ++x) {
      const bool covered = x + 0.5 >= 25.0 && x + 0.5 < 45.0;
      CHECK(r.occ.get(x, y) == covered);
    }
    // The upper layer itself is never occluded by the lower one.
    for (int x = 61; x < 79; ++x) CHECK_FALSE(r.occ.get(x, y));
  }
  CHECK(topmost_layer_frame2(s, {30, 30}) == 1);
  CHECK(topmost_layer_at(s, {30, 30}) == 0);
  CHECK(topmost_layer(s, 30, 30, 4) == 0);
}

TEST_CASE("rendered flow is complete and rendering is deterministic") {
  GenConfig c = preset("polyell-deformations");
  c.width = 128;
  c.height = 96;
  c.shape.max_diameter = 60;
  const SceneSpec s = sample_scene(c, 7);
  const RenderedPair a = render_pair(s, 2);
  const RenderedPair b = render_pair(s, 2);
  CHECK(a.frame1 == b.frame1);
  CHECK(a.frame2 == b.frame2);
  CHECK(a.flow == b.flow);
  CHECK(a.occ == b.occ);
  for (float v : a.flow.data()) CHECK(std::isfinite(v));
  for (float v : a.frame1.data()) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  // Flow at every pixel comes from the labeled layer's warp.
  for (int y = 0; y < c.height; y += 5) {
    for (int x = 0; x < c.width; x += 5) {
      const int l = a.labels.at(x, y);
      const LayerSpec& layer = l < 0 ? s.background : s.layers[static_cast<std::size_t>(l)];
      const Vec2 f = flow_at(layer.motion, {x + 0.5, y + 0.5});
      CHECK(a.flow.u(x, y) == static_cast<float>(f.x));
      CHECK(a.flow.v(x, y) == static_cast<float>(f.y));
    }
  }
}

TEST_CASE("render errors") {
  SceneSpec s = two_layer_scene({0, 0}, {0, 0});
  s.layers[0].texture = 9;
  try {
    render_pair(s, 4);
    FAIL("expected MissingTexture");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingTexture);
  }
  CHECK_THROWS_AS(render_pair(two_layer_scene({0, 0}, {0, 0}), 5), Error);
}
