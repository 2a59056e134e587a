#include "flowgen/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

namespace {

constexpr double kPi = std::numbers::pi;

double dist_to_segment_sq(Vec2 p, Vec2 a, Vec2 b) noexcept {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double len_sq = ab.x * ab.x + ab.y * ab.y;
  double t = len_sq > 0.0 ? (ap.x * ab.x + ap.y * ab.y) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = ap.x - t * ab.x;
  const double dy = ap.y - t * ab.y;
  return dx * dx + dy * dy;
}

bool ring_contains(const std::vector<Vec2>& ring, Vec2 p) noexcept {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[i], b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double ring_area(const std::vector<Vec2>& ring) noexcept {
  double twice = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  }
  return 0.5 * std::abs(twice);
}

double ring_perimeter(const std::vector<Vec2>& ring) noexcept {
  double total = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) total += norm(ring[i] - ring[j]);
  return total;
}

double cross(Vec2 o, Vec2 a, Vec2 b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) noexcept {
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool is_simple(const std::vector<Vec2>& ring) noexcept {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

/// Random star-shaped polygon: sorted angles, radii from a bounded lognormal,
/// rescaled so the farthest vertex sits at `radius`.
std::vector<Vec2> radial_polygon(int n, double radius, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = rng.uniform(0.0, 2.0 * kPi);
    std::sort(angles.begin(), angles.end());
    double min_gap = 2.0 * kPi - (angles.back() - angles.front());
    for (std::size_t i = 1; i < angles.size(); ++i) min_gap = std::min(min_gap, angles[i] - angles[i - 1]);

    std::vector<double> radii(static_cast<std::size_t>(n));
    double max_r = 0.0;
    for (double& r : radii) {
      r = std::clamp(std::exp(rng.normal(-0.2, 0.35)), 0.25, 1.0);
      max_r = std::max(max_r, r);
    }
    if (min_gap < 2.0 * kPi / (5.0 * n)) continue;

    std::vector<Vec2> ring(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const double r = radius * radii[i] / max_r;
      ring[i] = {r * std::cos(angles[i]), r * std::sin(angles[i])};
    }
    if (!is_simple(ring)) continue;
    if (ring_area(ring) < 0.1 * kPi * radius * radius) continue;
    return ring;
  }
  std::vector<Vec2> regular(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < regular.size(); ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / n;
    regular[i] = {radius * std::cos(a), radius * std::sin(a)};
  }
  return regular;
}

bool base_contains(const ShapeSpec& s, Vec2 p) noexcept {
  switch (s.shape_class) {
    case ShapeClass::Box: {
      const Box2 b = s.bounds();
      return p.x >= b.min.x && p.x < b.max.x && p.y >= b.min.y && p.y < b.max.y;
    }
    case ShapeClass::Polygon:
      return ring_contains(s.vertices, p);
    case ShapeClass::Ellipse: {
      const double dx = (p.x - s.center.x) / s.axes.x;
      const double dy = (p.y - s.center.y) / s.axes.y;
      return dx * dx + dy * dy <= 1.0;
    }
    case ShapeClass::Outline: {
      const double limit = 0.25 * s.stroke_width * s.stroke_width;
      const std::size_t n = s.vertices.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (dist_to_segment_sq(p, s.vertices[j], s.vertices[i]) <= limit) return true;
      }
      return false;
    }
    case ShapeClass::Needle:
      return dist_to_segment_sq(p, s.vertices[0], s.vertices[1]) <= 0.25 * s.stroke_width * s.stroke_width;
  }
  return false;
}

ShapeSpec make_hole(double diameter, Rng& rng) {
  ShapeSpec hole;
  if (rng.bernoulli(0.5)) {
    hole.shape_class = ShapeClass::Ellipse;
    const double a = 0.5 * diameter;
    hole.axes = {a, a * rng.uniform(0.5, 1.0)};
  } else {
    hole.shape_class = ShapeClass::Polygon;
    hole.vertices = radial_polygon(static_cast<int>(rng.uniform_int(3, 8)), 0.5 * diameter, rng);
  }
  return hole;
}

void translate_shape(ShapeSpec& s, Vec2 offset) {
  for (Vec2& v : s.vertices) v = v + offset;
  s.center = s.center + offset;
}

void add_holes(ShapeSpec& parent, const ShapeParams& params, Rng& rng) {
  const double d = parent.diameter();
  const int count = static_cast<int>(rng.uniform_int(params.min_holes, params.max_holes));
  const Box2 bounds = parent.bounds();
  struct Disk {
    Vec2 c;
    double r;
  };
  std::vector<Disk> placed;
  for (int h = 0; h < count; ++h) {
    const double frac = rng.uniform(params.min_hole_fraction, params.max_hole_fraction);
    ShapeSpec hole = make_hole(frac * d, rng);
    const double r = 0.5 * frac * d;
    const double margin = std::max(0.5, 0.02 * d);
    for (int attempt = 0; attempt < 50; ++attempt) {
      const Vec2 c = {rng.uniform(bounds.min.x, bounds.max.x), rng.uniform(bounds.min.y, bounds.max.y)};
      bool ok = true;
      // The hole lies inside its circumscribed disk; the disk (plus margin)
      // must lie inside the parent and clear of earlier holes.
      for (int k = 0; k < 48 && ok; ++k) {
        const double a = 2.0 * kPi * k / 48.0;
        ok = base_contains(parent, {c.x + (r + margin) * std::cos(a), c.y + (r + margin) * std::sin(a)});
      }
      for (const Vec2& v : parent.vertices) {
        if (ok && norm(v - c) <= r + margin) ok = false;
      }
      for (const Disk& other : placed) {
        if (ok && norm(other.c - c) <= other.r + r + margin) ok = false;
      }
      if (!ok) continue;
      translate_shape(hole, c);
      parent.holes.push_back(hole);
      placed.push_back({c, r});
      break;
    }
  }
}

}  // namespace

std::string_view to_string(ShapeClass c) noexcept {
  switch (c) {
    case ShapeClass::Box: return "box";
    case ShapeClass::Polygon: return "polygon";
    case ShapeClass::Ellipse: return "ellipse";
    case ShapeClass::Outline: return "outline";
    case ShapeClass::Needle: return "needle";
  }
  return "box";
}

ShapeClass shape_class_from_string(std::string_view name) {
  for (ShapeClass c : {ShapeClass::Box, ShapeClass::Polygon, ShapeClass::Ellipse, ShapeClass::Outline,
                       ShapeClass::Needle}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::ConfigError, "unknown shape class '" + std::string(name) + "'");
}

bool ShapeSpec::contains(Vec2 local) const noexcept {
  if (!base_contains(*this, local)) return false;
  for (const ShapeSpec& hole : holes) {
    if (base_contains(hole, local)) return false;
  }
  return true;
}

Box2 ShapeSpec::bounds() const noexcept {
  if (shape_class == ShapeClass::Ellipse) {
    return {{center.x - axes.x, center.y - axes.y}, {center.x + axes.x, center.y + axes.y}};
  }
  Box2 b{vertices.front(), vertices.front()};
  for (const Vec2& v : vertices) b.expand(v);
  const double pad = 0.5 * stroke_width;
  b.min = {b.min.x - pad, b.min.y - pad};
  b.max = {b.max.x + pad, b.max.y + pad};
  return b;
}

double ShapeSpec::diameter() const noexcept {
  if (shape_class == ShapeClass::Ellipse) return 2.0 * std::max(axes.x, axes.y);
  double r = 0.0;
  for (const Vec2& v : vertices) r = std::max(r, norm(v - center));
  return 2.0 * r + stroke_width;
}

double ShapeSpec::area() const noexcept {
  double a = 0.0;
  switch (shape_class) {
    case ShapeClass::Box:
    case ShapeClass::Polygon: a = ring_area(vertices); break;
    case ShapeClass::Ellipse: a = kPi * axes.x * axes.y; break;
    case ShapeClass::Outline: a = ring_perimeter(vertices) * stroke_width; break;
    case ShapeClass::Needle:
      a = norm(vertices[1] - vertices[0]) * stroke_width + 0.25 * kPi * stroke_width * stroke_width;
      break;
  }
  for (const ShapeSpec& h : holes) a -= h.area();
  return std::max(a, 0.0);
}

ShapeSpec sample_shape(const std::vector<ShapeClass>& classes, Rng& rng, const ShapeParams& params) {
  std::vector<ShapeClass> set = classes;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.empty()) throw Error(ErrorCode::EmptyClassSet, "shape class set is empty");

  ShapeSpec s;
  s.shape_class = set[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(set.size()) - 1))];
  const double d = std::exp(rng.uniform(std::log(params.min_diameter), std::log(params.max_diameter)));

  switch (s.shape_class) {
    case ShapeClass::Box: {
      const double ar = std::exp(rng.uniform(-std::log(params.max_box_aspect), std::log(params.max_box_aspect)));
      const double hw = 0.5 * d * ar / std::sqrt(1.0 + ar * ar);
      const double hh = 0.5 * d / std::sqrt(1.0 + ar * ar);
      s.vertices = {{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}};
      break;
    }
    case ShapeClass::Polygon: {
      const int n = static_cast<int>(rng.uniform_int(params.min_polygon_vertices, params.max_polygon_vertices));
      s.vertices = radial_polygon(n, 0.5 * d, rng);
      break;
    }
    case ShapeClass::Ellipse: {
      const double a = 0.5 * d;
      s.axes = {a, a * rng.uniform(1.0 / 3.0, 1.0)};
      if (rng.bernoulli(0.5)) std::swap(s.axes.x, s.axes.y);
      break;
    }
    case ShapeClass::Outline: {
      const double frac = std::min(rng.uniform(params.min_stroke_fraction, params.max_stroke_fraction), 0.1);
      s.stroke_width = std::min(std::max(frac * d, 1.0), 0.1 * d);
      const int n = static_cast<int>(rng.uniform_int(std::max(params.min_polygon_vertices, 4),
                                                     params.max_polygon_vertices));
      s.vertices = radial_polygon(n, 0.5 * (d - s.stroke_width), rng);
      break;
    }
    case ShapeClass::Needle: {
      const double aspect = rng.uniform(params.min_needle_aspect, params.max_needle_aspect);
      s.stroke_width = d / aspect;
      const double half = 0.5 * (d - s.stroke_width);
      const double theta = rng.uniform(0.0, kPi);
      const Vec2 dir = {half * std::cos(theta), half * std::sin(theta)};
      s.vertices = {{-dir.x, -dir.y}, dir};
      break;
    }
  }

  const bool can_hold_holes = s.shape_class == ShapeClass::Box || s.shape_class == ShapeClass::Polygon ||
                              s.shape_class == ShapeClass::Ellipse;
  // Always consume the decision draw so the stream layout is flag-independent.
  const bool wants_holes = rng.bernoulli(params.hole_probability);
  if (params.holes && can_hold_holes && wants_holes) {
    Rng hole_rng = rng.fork("holes");
    add_holes(s, params, hole_rng);
  }
  return s;
}

double Mask::sum() const noexcept {
  double total = 0.0;
  for (float c : coverage) total += c;
  return total;
}

void check_supersample(int supersample) {
  if (supersample != 1 && supersample != 2 && supersample != 4 && supersample != 8) {
    throw Error(ErrorCode::InvalidArgument, "supersample must be 1, 2, 4 or 8");
  }
}

std::vector<double> subsample_offsets(int supersample) {
  std::vector<double> offsets(static_cast<std::size_t>(supersample));
  for (int i = 0; i < supersample; ++i) offsets[static_cast<std::size_t>(i)] = (i + 0.5) / supersample;
  return offsets;
}

Mask rasterize_mask(const ShapeSpec& shape, const Affine2& placement, int width, int height,
                    int supersample) {
  check_supersample(supersample);
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  const double sub_area = 1.0 / (static_cast<double>(supersample) * supersample);
  if (!(std::abs(placement.determinant()) * shape.area() >= sub_area)) {
    throw Error(ErrorCode::ZeroArea, "placed shape is smaller than one subpixel");
  }
  const Affine2 to_local = invert(placement);

  Mask mask{width, height, std::vector<float>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0f)};
  const Box2 local = shape.bounds();
  Box2 frame{placement.apply(local.min), placement.apply(local.min)};
  frame.expand(placement.apply({local.max.x, local.min.y}));
  frame.expand(placement.apply({local.min.x, local.max.y}));
  frame.expand(placement.apply(local.max));
  const int x0 = std::max(0, static_cast<int>(std::floor(frame.min.x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(frame.min.y)));
  const int x1 = std::min(width - 1, static_cast<int>(std::floor(frame.max.x)));
  const int y1 = std::min(height - 1, static_cast<int>(std::floor(frame.max.y)));

  const std::vector<double> offsets = subsample_offsets(supersample);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      int hits = 0;
      for (double oy : offsets) {
        for (double ox : offsets) {
          if (shape.contains(to_local.apply({x + ox, y + oy}))) ++hits;
        }
      }
      mask.coverage[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] =
          static_cast<float>(hits * sub_area);
    }
  }
  return mask;
}

}  // namespace flowgen
