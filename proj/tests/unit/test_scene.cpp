#include <doctest.h>

#include <cmath>

#include "flowgen/config.hpp"
#include "flowgen/error.hpp"
#include "flowgen/raster.hpp"
#include "flowgen/rng.hpp"
#include "flowgen/scene.hpp"

using namespace flowgen;

namespace {

GenConfig small_config(const std::string& preset_name = "polyell-thin") {
  GenConfig c = preset(preset_name);
  c.width = 160;
  c.height = 120;
  c.shape.min_diameter = 16;
  c.shape.max_diameter = 60;
  c.min_objects = 4;
  c.max_objects = 8;
  return c;
}

bool same_motion(const WarpMap& a, const WarpMap& b) {
  for (double y = -20; y <= 140; y += 23) {
    for (double x = -20; x <= 180; x += 31) {
      if (!(a.apply({x, y}) == b.apply({x, y}))) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("scenes are deterministic per index") {
  const GenConfig c = small_config("polyell-deformations");
  for (std::uint64_t i = 0; i < 5; ++i) {
    const SceneSpec a = sample_scene(c, i);
    const SceneSpec b = sample_scene(c, i);
    REQUIRE(a.layers.size() == b.layers.size());
    CHECK(a.background.placement == b.background.placement);
    CHECK(same_motion(a.background.motion, b.background.motion));
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
      CHECK(a.layers[k].shape == b.layers[k].shape);
      CHECK(a.layers[k].placement == b.layers[k].placement);
      CHECK(same_motion(a.layers[k].motion, b.layers[k].motion));
      CHECK(a.textures[a.layers[k].texture]->image == b.textures[b.layers[k].texture]->image);
    }
  }
  const SceneSpec s0 = sample_scene(c, 0);
  const SceneSpec s1 = sample_scene(c, 1);
  CHECK_FALSE(s0.layers.front().placement == s1.layers.front().placement);
}

TEST_CASE("sampled scenes respect the config") {
  const GenConfig c = small_config();
  for (std::uint64_t i = 0; i < 30; ++i) {
    const SceneSpec s = sample_scene(c, i);
    CHECK(s.width == c.width);
    CHECK(s.height == c.height);
    CHECK(static_cast<int>(s.layers.size()) >= c.min_objects);
    CHECK(static_cast<int>(s.layers.size()) <= c.max_objects);
    CHECK_FALSE(s.background.shape.has_value());
    for (const LayerSpec& l : s.layers) {
      REQUIRE(l.shape.has_value());
      CHECK(footprint_in_frame(*l.shape, l.placement, c.width, c.height) >= 0.25);
      CHECK(l.texture < s.textures.size());
      CHECK(s.textures[l.texture]->image.width() >= kMinTextureSize);
      // Object motion is wrapped by the background motion.
      const WarpMap expect = layer_motion(s.background.motion, l.own_motion);
      CHECK(same_motion(l.motion, expect));
    }
  }
}

TEST_CASE("disabled motion components sample the identity") {
  GenConfig c = small_config();
  c.background_motion.translation_enabled = false;
  c.background_motion.rotation_enabled = false;
  c.background_motion.scaling_enabled = false;
  c.object_motion.rotation_enabled = false;
  c.object_motion.scaling_enabled = false;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const SceneSpec s = sample_scene(c, i);
    CHECK(s.background.motion.affine_part().is_identity());
    for (const LayerSpec& l : s.layers) {
      const Affine2 a = l.motion.affine_part();
      CHECK(a.a11 == 1.0);
      CHECK(a.a12 == 0.0);
      CHECK(a.a21 == 0.0);
      CHECK(a.a22 == 1.0);
    }
  }
}

TEST_CASE("toggling a motion component does not shift other draws") {
  GenConfig a = small_config();
  GenConfig b = a;
  b.object_motion.rotation_enabled = false;
  const SceneSpec sa = sample_scene(a, 3);
  const SceneSpec sb = sample_scene(b, 3);
  REQUIRE(sa.layers.size() == sb.layers.size());
  for (std::size_t k = 0; k < sa.layers.size(); ++k) {
    CHECK(sa.layers[k].placement == sb.layers[k].placement);
    CHECK(sa.layers[k].shape == sb.layers[k].shape);
  }
}

TEST_CASE("sample_motion with zero spread is the identity") {
  Rng rng(1);
  MotionDistribution d;
  const WarpMap w = sample_motion(d, {50, 50}, {{0, 0}, {100, 100}}, 3, 3, rng);
  CHECK(w.affine_part().is_identity());
  CHECK_FALSE(w.has_deform());
}

TEST_CASE("deformations stay bounded by their cap") {
  GenConfig c = small_config("polyell-deformations");
  for (std::uint64_t i = 0; i < 5; ++i) {
    const SceneSpec s = sample_scene(c, i);
    CHECK(s.background.motion.has_deform());
    const double bg_cell = std::min(c.width / 4.0, c.height / 3.0);
    for (const auto& st : s.background.motion.stages()) {
      if (st.deform) CHECK(st.deform->amplitude() <= 0.2 * bg_cell + 1e-12);
    }
  }
}

TEST_CASE("footprint_in_frame") {
  ShapeSpec box;
  box.shape_class = ShapeClass::Box;
  box.vertices = {{-10, -10}, {10, -10}, {10, 10}, {-10, 10}};
  CHECK(footprint_in_frame(box, Affine2::translation(50, 50), 100, 100) == 1.0);
  CHECK(footprint_in_frame(box, Affine2::translation(0, 50), 100, 100) == doctest::Approx(0.5));
  CHECK(footprint_in_frame(box, Affine2::translation(0, 0), 100, 100) == doctest::Approx(0.25));
  CHECK(footprint_in_frame(box, Affine2::translation(-50, 0), 100, 100) == 0.0);
}

TEST_CASE("impossible placement raises PlacementFailure") {
  GenConfig c = small_config("boxes-translation");
  c.shape.min_diameter = 5000;
  c.shape.max_diameter = 6000;
  c.shape.max_box_aspect = 1.0;
  try {
    sample_scene(c, 0);
    FAIL("expected PlacementFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PlacementFailure);
  }
}

TEST_CASE("photo scenes need a pool") {
  GenConfig c = small_config();
  c.texture = TextureFamily::Photo;
  c.photo_dir = "unused";
  CHECK_THROWS_AS(sample_scene(c, 0), Error);
  std::vector<Texture> empty;
  CHECK_THROWS_AS(sample_scene(c, 0, &empty), Error);
}
