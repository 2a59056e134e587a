#include <doctest.h>

#include <sstream>

#include "flowgen/config.hpp"
#include "flowgen/error.hpp"
#include "flowgen/io.hpp"
#include "flowgen/pipeline.hpp"
#include "test_support.hpp"

using namespace flowgen;
using flowgen::testing::TempDir;
using flowgen::testing::tree_digest;

namespace {

GenConfig tiny(const std::string& name = "polyell-thin") {
  GenConfig c = preset(name);
  c.width = 96;
  c.height = 64;
  c.supersample = 2;
  c.min_objects = 3;
  c.max_objects = 5;
  c.shape.min_diameter = 12;
  c.shape.max_diameter = 40;
  c.seed = 17;
  return c;
}

std::string record_of(const GenConfig& c, std::uint64_t i) {
  const Sample s = generate_sample(c, i);
  return encode_sample_record(i, s.frame1, s.frame2, s.flow, persisted_occlusion(s));
}

}  // namespace

TEST_CASE("samples depend only on config and index") {
  const GenConfig c = tiny();
  const std::string a = record_of(c, 5);
  record_of(c, 4);
  CHECK(record_of(c, 5) == a);
  CHECK(record_of(c, 6) != a);
  GenConfig other = c;
  other.seed = 18;
  CHECK(record_of(other, 5) != a);
}

TEST_CASE("camera profiles never touch the flow") {
  GenConfig plain = tiny();
  GenConfig cam = plain;
  cam.camera = camera_profile("bumblebee");
  cam.camera.bayer = true;
  const Sample a = generate_sample(plain, 2);
  const Sample b = generate_sample(cam, 2);
  CHECK(a.flow == b.flow);
  CHECK(a.occ == b.occ);
  CHECK_FALSE(a.frame1 == b.frame1);
}

TEST_CASE("persisted occlusion includes invalid pixels") {
  Sample s;
  s.occ = BoolMap(2, 1);
  s.valid = BoolMap(2, 1, true);
  s.valid.set(1, 0, false);
  const BoolMap p = persisted_occlusion(s);
  CHECK_FALSE(p.get(0, 0));
  CHECK(p.get(1, 0));
}

TEST_CASE("generation is thread-count independent and resumable") {
  const GenConfig c = tiny("aug-all");
  TempDir one;
  TempDir three;
  GenerationOptions o;
  o.begin = 0;
  o.end = 6;
  o.out_dir = one.path();
  o.threads = 1;
  const GenerationStats s1 = run_generation(c, o);
  CHECK(s1.generated == 6);
  o.out_dir = three.path();
  o.threads = 3;
  run_generation(c, o);
  CHECK(tree_digest(one.path()) == tree_digest(three.path()));

  const std::uint64_t before = tree_digest(one.path());
  fs::remove(sample_paths(one.path(), 3).flow);
  o.out_dir = one.path();
  std::uint64_t calls = 0;
  o.progress = [&](std::uint64_t, std::uint64_t) { ++calls; };
  const GenerationStats s2 = run_generation(c, o);
  CHECK(s2.generated == 1);
  CHECK(s2.skipped == 5);
  CHECK(calls == 6);
  CHECK(tree_digest(one.path()) == before);
}

TEST_CASE("a manifest regenerates its samples") {
  const GenConfig c = tiny("polyell-deformations");
  TempDir dir;
  GenerationOptions o;
  o.out_dir = dir.path();
  o.begin = 10;
  o.end = 12;
  run_generation(c, o);
  const std::string manifest = read_file(manifest_path(dir.path()));
  CHECK(manifest.find("manifest.samples = 10 12\n") != std::string::npos);
  CHECK(manifest.find("manifest.created = none\n") != std::string::npos);
  const GenConfig back = parse_config(manifest);
  CHECK(back == c);
  const Sample s = generate_sample(back, 11);
  const SamplePaths p = sample_paths(dir.path(), 11);
  CHECK(encode_flo(s.flow) == read_file(p.flow));
  CHECK(encode_pnm(s.frame2) == read_file(p.img2));
}

TEST_CASE("streaming writes records in index order") {
  const GenConfig c = tiny();
  std::ostringstream out;
  const std::uint64_t n = run_streaming(c, 3, 7, 2, out);
  CHECK(n == 4);
  std::string expect;
  for (std::uint64_t i = 3; i < 7; ++i) expect += record_of(c, i);
  CHECK(out.str() == expect);
}

TEST_CASE("streaming stops when the consumer goes away") {
  const GenConfig c = tiny();
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  CHECK(run_streaming(c, 0, std::nullopt, 2, out) == 0);
}

TEST_CASE("generation errors propagate") {
  GenConfig c = tiny();
  c.texture = TextureFamily::Photo;
  c.photo_dir = "/nonexistent/photos";
  TempDir dir;
  GenerationOptions o;
  o.out_dir = dir.path();
  o.end = 2;
  try {
    run_generation(c, o);
    FAIL("expected EmptyPool");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyPool);
  }
  c.photo_dir = (flowgen::testing::fixture_dir() / "photos").string();
  CHECK(run_generation(c, o).generated == 2);
}
