#include <doctest.h>

#include <cmath>

#include "flowgen/degrade.hpp"
#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"
#include "test_support.hpp"

using namespace flowgen;
using flowgen::testing::random_image;

namespace {

constexpr BayerPattern kPatterns[] = {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG,
                                      BayerPattern::GBRG};

double variance(const ImageBuffer& img) {
  double s = 0.0;
  double sq = 0.0;
  for (float v : img.data()) {
    s += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(img.data().size());
  return sq / n - (s / n) * (s / n);
}

}  // namespace

TEST_CASE("pattern names round trip") {
  for (BayerPattern p : kPatterns) CHECK(bayer_pattern_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(bayer_pattern_from_string("rgbw"), Error);
}

TEST_CASE("every pattern round-trips constant images losslessly") {
  Rng rng(1);
  for (BayerPattern p : kPatterns) {
    for (int t = 0; t < 5; ++t) {
      const int w = 3 + static_cast<int>(rng.uniform_int(0, 20));
      const int h = 3 + static_cast<int>(rng.uniform_int(0, 20));
      ImageBuffer img(w, h, 3);
      const float rgb[3] = {static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()),
                            static_cast<float>(rng.uniform())};
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = rgb[c];
      CHECK(bayer_cycle(img, p) == img);
    }
  }
}

TEST_CASE("mosaic keeps the filtered channel") {
  Rng rng(2);
  const ImageBuffer img = random_image(6, 4, 3, rng);
  const ImageBuffer s = bayer_mosaic(img, BayerPattern::RGGB);
  CHECK(s.channels() == 1);
  CHECK(s.at(0, 0, 0) == img.at(0, 0, 0));
  CHECK(s.at(1, 0, 0) == img.at(1, 0, 1));
  CHECK(s.at(0, 1, 0) == img.at(0, 1, 1));
  CHECK(s.at(1, 1, 0) == img.at(1, 1, 2));
  const ImageBuffer g = bayer_mosaic(img, BayerPattern::GBRG);
  CHECK(g.at(1, 0, 0) == img.at(1, 0, 2));
  CHECK(g.at(0, 1, 0) == img.at(0, 1, 0));
}

TEST_CASE("demosaic averages same-filter neighbors") {
  ImageBuffer sensor(4, 4, 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) sensor.at(x, y, 0) = static_cast<float>(y * 4 + x);
  const ImageBuffer rgb = demosaic(sensor, BayerPattern::RGGB);
  // Pixel (1, 1) is blue; red sits at its four diagonal neighbors.
  CHECK(rgb.at(1, 1, 2) == sensor.at(1, 1, 0));
  CHECK(rgb.at(1, 1, 0) == doctest::Approx((0 + 2 + 8 + 10) / 4.0));
  CHECK(rgb.at(1, 1, 1) == doctest::Approx((1 + 4 + 6 + 9) / 4.0));
}

TEST_CASE("step-edge chroma fringing stays within two pixels") {
  for (BayerPattern p : kPatterns) {
    ImageBuffer img(32, 16, 3);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 32; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = x < 16 ? 0.2f : 0.8f;
    const ImageBuffer out = bayer_cycle(img, p);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 32; ++x) {
        const float spread = std::max({out.at(x, y, 0), out.at(x, y, 1), out.at(x, y, 2)}) -
                             std::min({out.at(x, y, 0), out.at(x, y, 1), out.at(x, y, 2)});
        const bool near_edge = x >= 14 && x < 18;
        if (!near_edge) CHECK(spread == 0.0f);
      }
    }
  }
}

TEST_CASE("disabled profile is the identity") {
  Rng rng(3);
  ImageBuffer a = random_image(30, 20, 3, rng);
  ImageBuffer b = random_image(30, 20, 3, rng);
  const ImageBuffer a0 = a;
  const ImageBuffer b0 = b;
  CHECK(apply_profile(a, CameraProfile{}) == a0);
  apply_profile(a, b, camera_profile("none"));
  CHECK(a == a0);
  CHECK(b == b0);
  CHECK(radial_blur(a, 0.0) == a0);
  CHECK(gaussian_blur(a, 0.0) == a0);
  CHECK(contrast_boost(a, 1.0) == a0);
}

TEST_CASE("blur never increases variance") {
  Rng rng(4);
  const ImageBuffer img = random_image(64, 48, 3, rng);
  double last = variance(img);
  for (double sigma : {0.3, 0.6, 1.0, 2.0, 4.0}) {
    const double v = variance(gaussian_blur(img, sigma));
    CHECK(v <= last + 1e-9);
    last = v;
  }
  last = variance(img);
  for (double s : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    const double v = variance(radial_blur(img, s));
    CHECK(v <= last + 1e-9);
    last = v;
  }
}

TEST_CASE("gaussian blur preserves the mean of constant images") {
  const ImageBuffer flat(20, 20, 3, 0.37f);
  const ImageBuffer out = gaussian_blur(flat, 1.5);
  for (float v : out.data()) CHECK(v == doctest::Approx(0.37f).epsilon(1e-6));
}

TEST_CASE("radial blur leaves the center sharp") {
  ImageBuffer img(65, 65, 1);
  for (int y = 0; y < 65; ++y)
    for (int x = 0; x < 65; ++x) img.at(x, y, 0) = (x + y) % 2 ? 1.0f : 0.0f;
  const ImageBuffer out = radial_blur(img, 0.05);
  // Near the center the span is under a pixel, so the checkerboard survives.
  CHECK(std::abs(out.at(32, 32, 0) - img.at(32, 32, 0)) < 0.2);
  // In the corners it is averaged toward gray.
  CHECK(std::abs(out.at(2, 2, 0) - 0.5f) < 0.2);
}

TEST_CASE("contrast boost pivots around mid-gray") {
  ImageBuffer img(3, 1, 1);
  img.at(0, 0, 0) = 0.5f;
  img.at(1, 0, 0) = 0.6f;
  img.at(2, 0, 0) = 0.95f;
  const ImageBuffer out = contrast_boost(img, 2.0);
  CHECK(out.at(0, 0, 0) == 0.5f);
  CHECK(out.at(1, 0, 0) == doctest::Approx(0.7f));
  CHECK(out.at(2, 0, 0) == 1.0f);
  CHECK_THROWS_AS(contrast_boost(img, 0.5), Error);
  CHECK_THROWS_AS(gaussian_blur(img, -1), Error);
}

TEST_CASE("named profiles") {
  CHECK(camera_profile("none").is_identity());
  CHECK(camera_profile("bayer").bayer);
  const CameraProfile b = camera_profile("bumblebee");
  CHECK(b.radial_blur_strength > 0.0);
  CHECK(b.gaussian_sigma > 0.0);
  CHECK(b.contrast_boost > 1.0);
  CHECK_THROWS_AS(camera_profile("pinhole"), Error);
}
