#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "flowgen/error.hpp"
#include "flowgen/shapes.hpp"
#include "flowgen/rng.hpp"

using namespace flowgen;

namespace {

const std::vector<ShapeClass> kAll{ShapeClass::Box, ShapeClass::Polygon, ShapeClass::Ellipse, ShapeClass::Outline,
                                   ShapeClass::Needle};

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto cross = [](Vec2 o, Vec2 p, Vec2 q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool simple_ring(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

double shoelace(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 p = v[i];
    const Vec2 q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

}  // namespace

TEST_CASE("class names round trip") {
  for (ShapeClass c : kAll) CHECK(shape_class_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(shape_class_from_string("triangle"), Error);
}

TEST_CASE("empty class set is rejected") {
  Rng rng(1);
  try {
    sample_shape({}, rng);
    FAIL("expected EmptyClassSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyClassSet);
  }
}

TEST_CASE("sampled shapes respect their parameter ranges") {
  Rng rng(2);
  ShapeParams p;
  p.holes = true;
  for (int t = 0; t < 2000; ++t) {
    const ShapeSpec s = sample_shape(kAll, rng, p);
    CHECK(s.diameter() >= p.min_diameter * (1 - 1e-9));
    CHECK(s.diameter() <= p.max_diameter * (1 + 1e-9));
    CHECK(s.area() > 0.0);
    switch (s.shape_class) {
      case ShapeClass::Polygon:
        CHECK(static_cast<int>(s.vertices.size()) >= p.min_polygon_vertices);
        CHECK(static_cast<int>(s.vertices.size()) <= p.max_polygon_vertices);
        CHECK(simple_ring(s.vertices));
        break;
      case ShapeClass::Box: {
        const Box2 b = s.bounds();
        const double ar = std::max(b.width() / b.height(), b.height() / b.width());
        CHECK(ar <= p.max_box_aspect + 1e-9);
        break;
      }
      case ShapeClass::Needle: {
        const double aspect = s.diameter() / s.stroke_width;
        CHECK(aspect >= p.min_needle_aspect - 1e-9);
        CHECK(aspect <= p.max_needle_aspect + 1e-9);
        break;
      }
      case ShapeClass::Outline:
        CHECK(s.stroke_width <= 0.1 * s.diameter() + 1e-9);
        CHECK(simple_ring(s.vertices));
        break;
      case ShapeClass::Ellipse: break;
    }
    CHECK(s.holes.size() <= static_cast<std::size_t>(p.max_holes));
    for (const ShapeSpec& h : s.holes) CHECK(h.holes.empty());
  }
}

TEST_CASE("shape classes are drawn uniformly") {
  Rng rng(3);
  std::array<int, 5> hist{};
  const int n = 10000;
  for (int t = 0; t < n; ++t) ++hist[static_cast<std::size_t>(sample_shape(kAll, rng).shape_class)];
  for (int c : hist) CHECK(std::abs(c - n / 5) < 300);
  // Duplicates do not bias the draw.
  int boxes = 0;
  for (int t = 0; t < n; ++t) {
    boxes += sample_shape({ShapeClass::Box, ShapeClass::Box, ShapeClass::Box, ShapeClass::Ellipse}, rng)
                 .shape_class == ShapeClass::Box;
  }
  CHECK(std::abs(boxes - n / 2) < 300);
}

TEST_CASE("holes are removed from the footprint") {
  Rng rng(4);
  ShapeParams p;
  p.holes = true;
  p.hole_probability = 1.0;
  int with_holes = 0;
  for (int t = 0; t < 200; ++t) {
    const ShapeSpec s = sample_shape({ShapeClass::Ellipse}, rng, p);
    for (const ShapeSpec& h : s.holes) {
      ++with_holes;
      const Vec2 c = h.shape_class == ShapeClass::Ellipse ? h.center : h.vertices.front();
      if (h.shape_class == ShapeClass::Ellipse) CHECK_FALSE(s.contains(c));
    }
  }
  CHECK(with_holes > 100);
}

TEST_CASE("mask coverage matches analytic area") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const ShapeSpec s = sample_shape({ShapeClass::Box, ShapeClass::Polygon, ShapeClass::Ellipse}, rng);
    const Affine2 place = Affine2::translation(128, 128);
    const Mask m = rasterize_mask(s, place, 256, 256, 8);
    const double oracle = s.shape_class == ShapeClass::Ellipse ? std::numbers::pi * s.axes.x * s.axes.y
                                                                : shoelace(s.vertices);
    CHECK(m.sum() == doctest::Approx(oracle).epsilon(0.02));
  }
}

TEST_CASE("mask area is exact under integer translation and stable under rotation") {
  Rng rng(6);
  int tested = 0;
  double rel_sum = 0.0;
  double rel_max = 0.0;
  for (int t = 0; t < 80; ++t) {
    ShapeParams p;
    p.min_diameter = 20;
    p.max_diameter = 120;
    const ShapeSpec s = sample_shape({ShapeClass::Box, ShapeClass::Polygon, ShapeClass::Ellipse}, rng, p);
    // "At least 20 px" means in every direction, so thin slivers are skipped.
    const Box2 b = s.bounds();
    if (std::min(b.width(), b.height()) < 20.0) continue;
    ++tested;
    const Mask base = rasterize_mask(s, Affine2::translation(128, 128), 256, 256, 4);
    const Mask moved = rasterize_mask(s, Affine2::translation(145, 121), 256, 256, 4);
    CHECK(moved.sum() == base.sum());
    const Affine2 rot = compose(Affine2::translation(128, 128), Affine2::rotation_deg(rng.uniform(0, 360)));
    const Mask rotated = rasterize_mask(s, rot, 256, 256, 4);
    const double rel = std::abs(rotated.sum() - base.sum()) / base.sum();
    rel_sum += rel;
    rel_max = std::max(rel_max, rel);
  }
  REQUIRE(tested > 20);
  // A 4 x 4 grid quantizes an axis-aligned edge to a quarter pixel, so single
  // small boxes can drift past 1%; the average stays well inside it.
  CHECK(rel_sum / tested < 0.01);
  CHECK(rel_max < 0.025);
}

TEST_CASE("outline area is perimeter times stroke width") {
  Rng rng(7);
  ShapeParams p;
  p.min_diameter = 80;
  p.max_diameter = 160;
  p.min_stroke_fraction = 0.02;
  p.max_stroke_fraction = 0.03;
  for (int t = 0; t < 30; ++t) {
    const ShapeSpec s = sample_shape({ShapeClass::Outline}, rng, p);
    double perimeter = 0.0;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      perimeter += norm(s.vertices[(i + 1) % s.vertices.size()] - s.vertices[i]);
    }
    const Mask m = rasterize_mask(s, Affine2::translation(128, 128), 256, 256, 8);
    CHECK(m.sum() == doctest::Approx(perimeter * s.stroke_width).epsilon(0.10));
  }
}

TEST_CASE("masks are deterministic and bounded") {
  Rng a(8);
  Rng b(8);
  const ShapeSpec sa = sample_shape(kAll, a);
  const ShapeSpec sb = sample_shape(kAll, b);
  REQUIRE(sa == sb);
  const Affine2 place = compose(Affine2::translation(60.3, 70.7), Affine2::rotation(0.4));
  const Mask ma = rasterize_mask(sa, place, 128, 128, 4);
  const Mask mb = rasterize_mask(sb, place, 128, 128, 4);
  CHECK(ma.coverage == mb.coverage);
  for (float c : ma.coverage) {
    CHECK(c >= 0.0f);
    CHECK(c <= 1.0f);
  }
}

TEST_CASE("degenerate inputs raise errors") {
  Rng rng(9);
  const ShapeSpec s = sample_shape({ShapeClass::Ellipse}, rng);
  try {
    rasterize_mask(s, Affine2::scaling(1e-4), 64, 64, 4);
    FAIL("expected ZeroArea");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroArea);
  }
  CHECK_THROWS_AS(rasterize_mask(s, Affine2::identity(), 64, 64, 3), Error);
  CHECK(subsample_offsets(4) == std::vector<double>{0.125, 0.375, 0.625, 0.875});
}
