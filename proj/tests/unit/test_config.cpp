#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "flowgen/config.hpp"
#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

using namespace flowgen;

namespace {

std::vector<std::pair<std::string, std::string>> lines_of(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const std::size_t eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

/// A different but well-formed value for a canonical config value.
std::string perturb(const std::string& key, const std::string& value) {
  if (value == "true") return "false";
  if (value == "false") return "true";
  if (key == "texture.family") return value == "clouds" ? "plasma" : "clouds";
  if (key == "shapes.classes") return "box";
  if (key == "augment.interp") return value == "bilinear" ? "nearest" : "bilinear";
  if (key == "camera.bayer") return value == "none" ? "rggb" : "none";
  if (key == "texture.photo_dir") return value + "x";
  const std::size_t comma = value.find(',');
  if (comma != std::string::npos) {
    const std::size_t close = value.find(')');
    return value.substr(0, comma + 1) + std::to_string(std::stod(value.substr(comma + 1, close - comma - 1)) + 1) + ")";
  }
  if (value.find_first_of(".e") == std::string::npos) return std::to_string(std::stoll(value) + 1);
  return std::to_string(std::stod(value) + 1);
}

}  // namespace

TEST_CASE("canonical text is sorted and round-trips") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const GenConfig c = preset(name);
    const std::string text = canonical_text(c);
    const auto lines = lines_of(text);
    CHECK(std::is_sorted(lines.begin(), lines.end()));
    const GenConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(canonical_text(back) == text);
    CHECK(config_hash(back) == config_hash(c));
  }
}

TEST_CASE("every field change alters the hash") {
  const GenConfig base = preset("polyell-thin");
  const std::string h0 = config_hash(base);
  CHECK(h0.size() == 16);
  std::set<std::string> hashes{h0};
  const auto lines = lines_of(canonical_text(base));
  for (const auto& [key, value] : lines) {
    CAPTURE(key);
    GenConfig c = base;
    set_config_value(c, key, perturb(key, value));
    const std::string h = config_hash(c);
    CHECK(h != h0);
    hashes.insert(h);
  }
  CHECK(hashes.size() == lines.size() + 1);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("width = 64\n\n# comment\nbogus.key = 3\n");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("width = abc\n"), Error);
  CHECK_THROWS_AS(parse_config("width\n"), Error);
  CHECK_THROWS_AS(parse_config("motion.object.translation = gamma(1,2)\n"), Error);
}

TEST_CASE("manifest keys are ignored and base configs are layered") {
  GenConfig base;
  base.width = 300;
  const GenConfig c = parse_config("height = 200\nmanifest.created = none\nmanifest.samples = 0 4\n", base);
  CHECK(c.width == 300);
  CHECK(c.height == 200);
}

TEST_CASE("distributions print and parse") {
  const ScalarDistribution n = ScalarDistribution::normal(0, 2.5);
  CHECK(n.to_string() == "normal(0,2.5)");
  CHECK(ScalarDistribution::parse("normal(0,2.5)") == n);
  CHECK(ScalarDistribution::parse(" uniform( -1 , 3 ) ") == ScalarDistribution::uniform(-1, 3));
  CHECK(ScalarDistribution::uniform(-0.0, 0.0).to_string() == "uniform(0,0)");
  CHECK_THROWS_AS(ScalarDistribution::parse("normal(1)"), Error);
}

TEST_CASE("sampling always consumes two uniforms") {
  for (const ScalarDistribution& d : {ScalarDistribution::normal(1, 2), ScalarDistribution::uniform(-3, 3),
                                      ScalarDistribution::constant(4)}) {
    Rng a(5);
    Rng b(5);
    d.sample(a);
    b.uniform();
    b.uniform();
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng r(6);
  CHECK(ScalarDistribution::constant(4).sample(r) == 4.0);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = ScalarDistribution::normal(1, 2).sample(r);
    sum += v;
    sq += v * v;
  }
  CHECK(sum / 20000 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::sqrt(sq / 20000 - (sum / 20000) * (sum / 20000)) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("scale_distribution multiplies magnitudes") {
  const MotionDistribution m = default_object_motion();
  const MotionDistribution s = scale_distribution(m, 2.0);
  CHECK(s.translation.b == 2.0 * m.translation.b);
  CHECK(s.rotation_deg.b == 2.0 * m.rotation_deg.b);
  CHECK(s.log_scale.b == 2.0 * m.log_scale.b);
  CHECK(s.deform.b == 2.0 * m.deform.b);
  CHECK(s.global_scale == 2.0);
  CHECK(scale_distribution(s, 1.5).global_scale == 3.0);
  for (double k : {0.0, -1.0}) {
    try {
      scale_distribution(m, k);
      FAIL("expected NonpositiveFactor");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonpositiveFactor);
    }
  }
}

TEST_CASE("presets cover every ablation row") {
  const auto names = preset_names();
  for (const char* n : {"boxes-translation", "polygons-translation", "ellipses-translation", "polyell-translation",
                        "polyell-rotation", "polyell-scaling", "polyell-holes", "polyell-thin",
                        "polyell-deformations", "textures-plasma", "textures-clouds", "textures-photo",
                        "sintel-like-1x", "sintel-like-2x", "sintel-like-3x", "aug-none", "aug-color",
                        "aug-color-between", "aug-geom", "aug-geom-between", "aug-color-geom", "aug-all",
                        "camera-bumblebee", "camera-bayer"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  for (const std::string& n : names) {
    CAPTURE(n);
    CHECK_NOTHROW(preset(n).validate());
  }
  CHECK_THROWS_AS(preset("no-such-preset"), Error);

  CHECK(preset("boxes-translation").shape_classes == std::vector<ShapeClass>{ShapeClass::Box});
  CHECK_FALSE(preset("polyell-translation").object_motion.rotation_enabled);
  CHECK(preset("polyell-rotation").object_motion.rotation_enabled);
  CHECK_FALSE(preset("polyell-rotation").object_motion.scaling_enabled);
  CHECK(preset("polyell-holes").shape.holes);
  CHECK(preset("polyell-deformations").object_motion.deformation_enabled);
  CHECK(preset("textures-plasma").texture == TextureFamily::Plasma);
  CHECK(preset("sintel-like-3x").object_motion == scale_distribution(default_object_motion(), 3.0));
  CHECK(preset("sintel-like-2x").background_motion == scale_distribution(default_background_motion(), 2.0));
  const GenConfig all = preset("aug-all");
  CHECK((all.augment.color_both && all.augment.color_between && all.augment.geom_both && all.augment.geom_between));
  CHECK(preset("camera-bumblebee").camera == camera_profile("bumblebee"));
  CHECK(preset("camera-bayer").camera.bayer);
}

TEST_CASE("validation rejects inconsistent configs") {
  auto bad = [](auto mutate) {
    GenConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), Error);
  };
  bad([](GenConfig& c) { c.width = 0; });
  bad([](GenConfig& c) { c.supersample = 3; });
  bad([](GenConfig& c) { c.min_objects = 5, c.max_objects = 2; });
  bad([](GenConfig& c) { c.clouds_octaves = 0; });
  bad([](GenConfig& c) { c.texture = TextureFamily::Photo; });
  bad([](GenConfig& c) { c.augment.geom_between = true; });
  bad([](GenConfig& c) { c.shape_classes.clear(); });
  CHECK_NOTHROW(GenConfig{}.validate());
}
