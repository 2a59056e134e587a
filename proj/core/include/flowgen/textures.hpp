#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "flowgen/image.hpp"

namespace flowgen {

class Rng;

enum class TextureFamily { Plasma, Clouds, Photo };

std::string_view to_string(TextureFamily f) noexcept;
TextureFamily texture_family_from_string(std::string_view name);

/// RGB image in [0, 1], at least 64 x 64.
struct Texture {
  ImageBuffer image;
  TextureFamily family = TextureFamily::Clouds;
  std::string source_id;
};

inline constexpr int kMinTextureSize = 64;

struct PlasmaParams {
  /// Approximate number of Voronoi sites.
  int sites = 200;
  /// Smallest quadtree leaf; bounds the smallest cells.
  double min_leaf = 2.0;
  /// Per-cell color jitter around the smooth color ramp.
  double color_jitter = 0.08;
};

/// Flat-color cell partition underlying a plasma texture.
struct PlasmaCells {
  int width = 0;
  int height = 0;
  std::vector<int> labels;         // per pixel, index into `colors`
  std::vector<std::array<float, 3>> colors;  // per cell
  std::vector<double> site_x, site_y;
};

/// Voronoi cells over quadtree-distributed sites (a few large cells, clusters
/// of tiny ones), colored by a smooth random ramp plus a small jitter.
PlasmaCells plasma_cells(int width, int height, Rng& rng, const PlasmaParams& params = {});
Texture gen_plasma(int width, int height, Rng& rng, const PlasmaParams& params = {});

struct CloudParams {
  int octaves = 6;
  /// Per-octave amplitude factor.
  double persistence = 0.70710678118654752;
};

/// Sum of bilinearly upsampled color noise over dyadic scales, renormalized
/// per channel to [0, 1]. octaves must lie in [1, 10].
Texture gen_clouds(int width, int height, int octaves, Rng& rng, double persistence = CloudParams{}.persistence);

/// Grid spacing (px) of octave `k` for an image of the given size.
double cloud_octave_spacing(int width, int height, int k) noexcept;

/// Decodes every .png / .ppm file of `directory` in lexicographic filename
/// order. Throws Error(EmptyPool) when nothing decodable is present and
/// Error(DecodeFailure) naming the first bad file.
std::vector<Texture> load_photo_pool(const std::filesystem::path& directory);

/// A width x height window of a randomly chosen pool photo. Photos smaller
/// than the window are bilinearly upscaled first. Throws EmptyPool.
Texture photo_crop(const std::vector<Texture>& pool, int width, int height, Rng& rng);

}  // namespace flowgen
