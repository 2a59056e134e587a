#include "flowgen/textures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flowgen/error.hpp"
#include "flowgen/io.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

std::string_view to_string(TextureFamily f) noexcept {
  switch (f) {
    case TextureFamily::Plasma: return "plasma";
    case TextureFamily::Clouds: return "clouds";
    case TextureFamily::Photo: return "photo";
  }
  return "clouds";
}

TextureFamily texture_family_from_string(std::string_view name) {
  if (name == "plasma") return TextureFamily::Plasma;
  if (name == "clouds") return TextureFamily::Clouds;
  if (name == "photo") return TextureFamily::Photo;
  throw Error(ErrorCode::ConfigError, "unknown texture family '" + std::string(name) + "'");
}

namespace {

void check_texture_dims(int width, int height) {
  if (width < kMinTextureSize || height < kMinTextureSize) {
    throw Error(ErrorCode::InvalidArgument, "texture dimensions must be at least 64 x 64");
  }
}

// ---- plasma ----------------------------------------------------------------

struct Leaf {
  double x = 0.0, y = 0.0, size = 0.0;
  bool locked = false;
  bool jitter = true;
};

class Quadtree {
 public:
  Quadtree(int width, int height) : width_(width), height_(height) {}

  bool in_image(const Leaf& l) const noexcept { return l.x < width_ && l.y < height_; }
  bool fully_inside(const Leaf& l) const noexcept {
    return l.x + l.size <= width_ && l.y + l.size <= height_;
  }

  /// Replaces leaf `i` by its children that touch the image. Returns the
  /// index of the first child (children are appended, the first one reuses
  /// slot i).
  void split(std::size_t i) {
    const Leaf parent = leaves[i];
    const double h = parent.size / 2.0;
    bool reused = false;
    for (int q = 0; q < 4; ++q) {
      Leaf child = parent;
      child.x = parent.x + (q % 2) * h;
      child.y = parent.y + (q / 2) * h;
      child.size = h;
      if (!in_image(child)) continue;
      if (!reused) {
        leaves[i] = child;
        reused = true;
      } else {
        leaves.push_back(child);
      }
    }
  }

  /// Index of the leaf whose corner is (x, y) with the given size, if any.
  std::ptrdiff_t find(double x, double y, double size) const noexcept {
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].x == x && leaves[i].y == y && leaves[i].size == size) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
  }

  std::vector<Leaf> leaves;

 private:
  int width_;
  int height_;
};

/// Nearest-site labeling over a uniform bucket grid. Ties go to the lower
/// site index.
std::vector<int> label_nearest(int width, int height, const std::vector<double>& sx,
                               const std::vector<double>& sy) {
  const double bucket = std::max(4.0, std::sqrt(static_cast<double>(width) * height / sx.size()));
  const int bw = static_cast<int>(std::ceil(width / bucket));
  const int bh = static_cast<int>(std::ceil(height / bucket));
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(bw) * bh);
  for (std::size_t s = 0; s < sx.size(); ++s) {
    const int bx = std::clamp(static_cast<int>(sx[s] / bucket), 0, bw - 1);
    const int by = std::clamp(static_cast<int>(sy[s] / bucket), 0, bh - 1);
    buckets[static_cast<std::size_t>(by) * bw + bx].push_back(static_cast<int>(s));
  }

  std::vector<int> labels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const double py = y + 0.5;
    const int by = std::min(static_cast<int>(py / bucket), bh - 1);
    for (int x = 0; x < width; ++x) {
      const double px = x + 0.5;
      const int bx = std::min(static_cast<int>(px / bucket), bw - 1);
      double best = std::numeric_limits<double>::infinity();
      int best_site = -1;
      for (int ring = 0;; ++ring) {
        for (int j = by - ring; j <= by + ring; ++j) {
          if (j < 0 || j >= bh) continue;
          const bool edge_row = j == by - ring || j == by + ring;
          for (int i = bx - ring; i <= bx + ring; i += (edge_row ? 1 : 2 * ring)) {
            if (i >= 0 && i < bw) {
              for (int s : buckets[static_cast<std::size_t>(j) * bw + i]) {
                const double dx = sx[s] - px;
                const double dy = sy[s] - py;
                const double d = dx * dx + dy * dy;
                if (d < best || (d == best && s < best_site)) {
                  best = d;
                  best_site = s;
                }
              }
            }
            if (ring == 0) break;
          }
        }
        // Every site in ring r + 1 or beyond is at least r * bucket away.
        const double reach = ring * bucket;
        if (best_site >= 0 && best < reach * reach) break;
        if (ring > bw + bh) break;
      }
      labels[static_cast<std::size_t>(y) * width + x] = best_site;
    }
  }
  return labels;
}

double smoothstep(double t) noexcept { return t * t * (3.0 - 2.0 * t); }

}  // namespace

PlasmaCells plasma_cells(int width, int height, Rng& rng, const PlasmaParams& params) {
  check_texture_dims(width, height);
  if (params.sites < 16 || params.min_leaf <= 0.0 || params.color_jitter < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "plasma needs >= 16 sites, positive min_leaf, nonnegative jitter");
  }
  Rng tree_rng = rng.fork("plasma-tree");
  Rng jitter_rng = rng.fork("plasma-jitter");
  Rng color_rng = rng.fork("plasma-color");

  const double root = std::max(width, height);
  const double quarter = root / 4.0;
  Quadtree tree(width, height);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      Leaf l{i * quarter, j * quarter, quarter};
      if (tree.in_image(l)) tree.leaves.push_back(l);
    }
  }

  // One quarter-size cell anchored in the top-left corner guarantees the
  // large end of the size range: its neighbors keep fixed, unjittered sites.
  auto lock = [&](double x, double y) {
    const std::ptrdiff_t i = tree.find(x, y, quarter);
    if (i < 0) return;
    tree.leaves[static_cast<std::size_t>(i)].locked = true;
    tree.leaves[static_cast<std::size_t>(i)].jitter = false;
  };
  lock(0.0, 0.0);
  lock(quarter, 0.0);
  lock(0.0, quarter);
  if (const std::ptrdiff_t d = tree.find(quarter, quarter, quarter); d >= 0) {
    tree.leaves[static_cast<std::size_t>(d)].locked = true;
    tree.leaves[static_cast<std::size_t>(d)].jitter = false;
    tree.split(static_cast<std::size_t>(d));
  }

  // A chain of nested splits down to min_leaf guarantees the small end.
  std::vector<std::size_t> chain_roots;
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    if (!tree.leaves[i].locked && tree.fully_inside(tree.leaves[i])) chain_roots.push_back(i);
  }
  if (!chain_roots.empty()) {
    std::size_t cur = chain_roots[static_cast<std::size_t>(
        tree_rng.uniform_int(0, static_cast<std::int64_t>(chain_roots.size()) - 1))];
    while (tree.leaves[cur].size / 2.0 >= params.min_leaf) {
      const std::size_t before = tree.leaves.size();
      tree.split(cur);
      const auto pick = tree_rng.uniform_int(0, 3);
      if (pick > 0) cur = before + static_cast<std::size_t>(pick - 1);
    }
  }

  // Uniform choice over leaves favors already-fine regions, which clusters
  // the small cells.
  std::vector<std::size_t> candidates;
  while (static_cast<int>(tree.leaves.size()) < params.sites) {
    candidates.clear();
    for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
      if (!tree.leaves[i].locked && tree.leaves[i].size / 2.0 >= params.min_leaf) candidates.push_back(i);
    }
    if (candidates.empty()) break;
    tree.split(candidates[static_cast<std::size_t>(
        tree_rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))]);
  }

  PlasmaCells cells;
  cells.width = width;
  cells.height = height;
  const std::size_t n = tree.leaves.size();
  cells.site_x.resize(n);
  cells.site_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Leaf& l = tree.leaves[i];
    const double jx = jitter_rng.uniform(-0.25, 0.25);
    const double jy = jitter_rng.uniform(-0.25, 0.25);
    const double k = l.jitter ? l.size : 0.0;
    cells.site_x[i] = l.x + 0.5 * l.size + k * jx;
    cells.site_y[i] = l.y + 0.5 * l.size + k * jy;
  }
  cells.labels = label_nearest(width, height, cells.site_x, cells.site_y);

  std::array<std::array<double, 3>, 9> ramp{};
  for (auto& c : ramp) {
    for (double& v : c) v = color_rng.uniform();
  }
  cells.colors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::clamp(2.0 * cells.site_x[i] / width, 0.0, 2.0);
    const double v = std::clamp(2.0 * cells.site_y[i] / height, 0.0, 2.0);
    const int gi = std::min(static_cast<int>(u), 1);
    const int gj = std::min(static_cast<int>(v), 1);
    const double tu = smoothstep(u - gi);
    const double tv = smoothstep(v - gj);
    for (int c = 0; c < 3; ++c) {
      const double top = ramp[gj * 3 + gi][c] + (ramp[gj * 3 + gi + 1][c] - ramp[gj * 3 + gi][c]) * tu;
      const double bot =
          ramp[(gj + 1) * 3 + gi][c] + (ramp[(gj + 1) * 3 + gi + 1][c] - ramp[(gj + 1) * 3 + gi][c]) * tu;
      const double base = top + (bot - top) * tv;
      const double jit = color_rng.uniform(-params.color_jitter, params.color_jitter);
      cells.colors[i][c] = static_cast<float>(std::clamp(base + jit, 0.0, 1.0));
    }
  }
  return cells;
}

Texture gen_plasma(int width, int height, Rng& rng, const PlasmaParams& params) {
  const PlasmaCells cells = plasma_cells(width, height, rng, params);
  Texture t{ImageBuffer(width, height, 3), TextureFamily::Plasma, "plasma:" + std::to_string(rng.seed())};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto& col = cells.colors[static_cast<std::size_t>(cells.labels[static_cast<std::size_t>(y) * width + x])];
      for (int c = 0; c < 3; ++c) t.image.at(x, y, c) = col[c];
    }
  }
  return t;
}

// ---- clouds ----------------------------------------------------------------

double cloud_octave_spacing(int width, int height, int k) noexcept {
  const double base = std::max(width, height) / 4.0;
  return std::max(base / std::ldexp(1.0, k), 1.0);
}

Texture gen_clouds(int width, int height, int octaves, Rng& rng, double persistence) {
  check_texture_dims(width, height);
  if (octaves < 1 || octaves > 10) throw Error(ErrorCode::InvalidArgument, "clouds octaves must lie in [1, 10]");
  if (!(persistence > 0.0 && persistence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "clouds persistence must lie in (0, 1]");
  }
  const std::size_t npix = static_cast<std::size_t>(width) * height;
  std::vector<double> acc(3 * npix, 0.0);

  for (int k = 0; k < octaves; ++k) {
    Rng orng = rng.fork("clouds-octave", static_cast<std::uint64_t>(k));
    const double s = cloud_octave_spacing(width, height, k);
    const double amp = std::pow(persistence, k);
    const double ox = orng.uniform(0.0, s);
    const double oy = orng.uniform(0.0, s);
    const int nx = static_cast<int>(std::floor((width + ox) / s)) + 2;
    const int ny = static_cast<int>(std::floor((height + oy) / s)) + 2;
    std::vector<double> nodes(3 * static_cast<std::size_t>(nx) * ny);
    for (double& v : nodes) v = orng.uniform(-1.0, 1.0);

    for (int y = 0; y < height; ++y) {
      const double gy = (y + 0.5 + oy) / s;
      const int j = std::min(static_cast<int>(gy), ny - 2);
      const double ty = gy - j;
      for (int x = 0; x < width; ++x) {
        const double gx = (x + 0.5 + ox) / s;
        const int i = std::min(static_cast<int>(gx), nx - 2);
        const double tx = gx - i;
        const std::size_t n00 = 3 * (static_cast<std::size_t>(j) * nx + i);
        const std::size_t n01 = n00 + 3;
        const std::size_t n10 = n00 + 3 * static_cast<std::size_t>(nx);
        const std::size_t n11 = n10 + 3;
        double* out = &acc[3 * (static_cast<std::size_t>(y) * width + x)];
        for (int c = 0; c < 3; ++c) {
          const double top = nodes[n00 + c] + (nodes[n01 + c] - nodes[n00 + c]) * tx;
          const double bot = nodes[n10 + c] + (nodes[n11 + c] - nodes[n10 + c]) * tx;
          out[c] += amp * (top + (bot - top) * ty);
        }
      }
    }
  }

  Texture t{ImageBuffer(width, height, 3), TextureFamily::Clouds, "clouds:" + std::to_string(rng.seed())};
  auto data = t.image.data();
  for (int c = 0; c < 3; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t p = 0; p < npix; ++p) {
      lo = std::min(lo, acc[3 * p + c]);
      hi = std::max(hi, acc[3 * p + c]);
    }
    const double span = hi - lo;
    for (std::size_t p = 0; p < npix; ++p) {
      data[3 * p + c] = span > 1e-12 ? static_cast<float>((acc[3 * p + c] - lo) / span) : 0.5f;
    }
  }
  return t;
}

// ---- photos ----------------------------------------------------------------

std::vector<Texture> load_photo_pool(const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(directory, ec)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::EmptyPool, directory.string() + ": " + ec.message());
  if (files.empty()) throw Error(ErrorCode::EmptyPool, directory.string() + ": no .png or .ppm images");
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  std::vector<Texture> pool;
  pool.reserve(files.size());
  for (const auto& f : files) {
    ImageBuffer img;
    try {
      img = read_rgb_image(f);
    } catch (const Error& e) {
      throw Error(ErrorCode::DecodeFailure, f.string() + ": " + e.what());
    }
    if (img.width() < kMinTextureSize || img.height() < kMinTextureSize) {
      throw Error(ErrorCode::DecodeFailure, f.string() + ": smaller than 64 x 64");
    }
    pool.push_back(Texture{std::move(img), TextureFamily::Photo, f.string()});
  }
  return pool;
}

Texture photo_crop(const std::vector<Texture>& pool, int width, int height, Rng& rng) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "photo pool is empty");
  check_texture_dims(width, height);
  const auto idx = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
  const ImageBuffer& src = pool[idx].image;
  const double scale = std::max({1.0, static_cast<double>(width) / src.width(),
                                 static_cast<double>(height) / src.height()});
  const int sw = std::max(width, static_cast<int>(std::ceil(src.width() * scale)));
  const int sh = std::max(height, static_cast<int>(std::ceil(src.height() * scale)));
  const auto ox = static_cast<int>(rng.uniform_int(0, sw - width));
  const auto oy = static_cast<int>(rng.uniform_int(0, sh - height));

  Texture t{ImageBuffer(width, height, 3), TextureFamily::Photo, pool[idx].source_id};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double xi = (x + ox + 0.5) / scale - 0.5;
      const double yi = (y + oy + 0.5) / scale - 0.5;
      for (int c = 0; c < 3; ++c) {
        t.image.at(x, y, c) = scale == 1.0 ? src.at(x + ox, y + oy, c) : src.sample(xi, yi, c);
      }
    }
  }
  return t;
}

}  // namespace flowgen
