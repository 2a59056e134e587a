#pragma once

#include <string_view>
#include <vector>

#include "flowgen/geometry.hpp"

namespace flowgen {

class Rng;

enum class ShapeClass { Box, Polygon, Ellipse, Outline, Needle };

std::string_view to_string(ShapeClass c) noexcept;
/// Throws Error(ConfigError) on unknown names.
ShapeClass shape_class_from_string(std::string_view name);

/// A shape in object-local pixel coordinates, centered near the origin.
///
/// Box and Polygon store a closed vertex ring; Ellipse stores semi-axes around
/// `center`; Outline strokes the closed vertex ring and Needle strokes the
/// open segment between its two vertices, each with `stroke_width`.
struct ShapeSpec {
  ShapeClass shape_class = ShapeClass::Box;
  std::vector<Vec2> vertices;
  Vec2 center;
  Vec2 axes;
  double stroke_width = 0.0;
  /// Subtracted from the footprint. Holes never carry holes themselves.
  std::vector<ShapeSpec> holes;

  bool contains(Vec2 local) const noexcept;
  Box2 bounds() const noexcept;
  /// Twice the largest distance from `center` to the footprint.
  double diameter() const noexcept;
  /// Analytic footprint area with holes removed (stroke shapes approximate
  /// their area as length * stroke_width).
  double area() const noexcept;

  bool operator==(const ShapeSpec&) const = default;
};

/// Sampling ranges for `sample_shape`. Sizes are footprint diameters in px.
struct ShapeParams {
  double min_diameter = 32.0;
  double max_diameter = 160.0;
  int min_polygon_vertices = 3;
  int max_polygon_vertices = 12;
  double max_box_aspect = 3.0;
  double min_needle_aspect = 8.0;
  double max_needle_aspect = 24.0;
  /// Outline stroke as a fraction of the diameter (capped at 0.1).
  double min_stroke_fraction = 0.03;
  double max_stroke_fraction = 0.08;

  bool holes = false;
  double hole_probability = 0.7;
  int min_holes = 1;
  int max_holes = 3;
  double min_hole_fraction = 0.1;
  double max_hole_fraction = 0.3;

  bool operator==(const ShapeParams&) const = default;
};

/// Draws a class uniformly from `classes` (duplicates are ignored) and then
/// its parameters. Throws Error(EmptyClassSet) for an empty set.
ShapeSpec sample_shape(const std::vector<ShapeClass>& classes, Rng& rng,
                       const ShapeParams& params = {});

/// Antialiased coverage of a placed shape, in [0, 1] per pixel.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<float> coverage;

  float at(int x, int y) const noexcept {
    return coverage[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)];
  }
  double sum() const noexcept;
};

/// Coverage at supersample^2 uniform subsamples per pixel of `shape` mapped
/// into the frame by `placement`. supersample must be 1, 2, 4 or 8. Throws
/// Error(ZeroArea) when the placed shape is smaller than one subpixel.
Mask rasterize_mask(const ShapeSpec& shape, const Affine2& placement, int width, int height,
                    int supersample);

/// Subsample offsets within a pixel: (i + 0.5) / supersample.
std::vector<double> subsample_offsets(int supersample);
void check_supersample(int supersample);

}  // namespace flowgen
