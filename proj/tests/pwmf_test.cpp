#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "lrl0/noise.hpp"
#include "lrl0/pwmf.hpp"
#include "test_support.hpp"

namespace lrl0 {
namespace {

GrayImage impulse_on_background(int side, double background, double impulse) {
  GrayImage img(side, side, background);
  img(side / 2, side / 2) = impulse;
  return img;
}

TEST(Road, ConstantImageIsZero) {
  const GrayImage img(5, 5, 33.0);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) EXPECT_EQ(road(img, {r, c}), 0.0);
}

TEST(Road, SingleImpulse) {
  const GrayImage img = impulse_on_background(7, 0.0, 255.0);
  EXPECT_EQ(road(img, {3, 3}), 1020.0);
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if (dr || dc) {
        EXPECT_EQ(road(img, {3 + dr, 3 + dc}), 0.0);
      }
}

TEST(Road, MirrorsAtBorders) {
  // Corner (0,0): mirrored neighbours are (1,1), (1,0), (0,1) and their copies.
  GrayImage img(3, 3, {10, 20, 0, 30, 40, 0, 0, 0, 0});
  // Differences: 10 x2, 20 x2, 30 x4.
  EXPECT_EQ(road(img, {0, 0}), 60.0);
  EXPECT_EQ(road(img, {0, 0}, 8), 180.0);
  EXPECT_THROW(road(img, {3, 0}), Error);
}

TEST(Pwmf, ConstantImageUnchanged) {
  const GrayImage img(20, 20, 77.0);
  EXPECT_EQ(pwmf(img), img);
}

TEST(Pwmf, RestoresIsolatedImpulse) {
  const GrayImage img = impulse_on_background(21, 100.0, 255.0);
  const GrayImage out = pwmf(img);
  EXPECT_NEAR(out(10, 10), 100.0, 1.0);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], 100.0, 1.0);
}

TEST(Pwmf, OutputStaysWithinInputRange) {
  const GrayImage clean = testing::load_crop("astronaut.pgm", 64);
  const GrayImage noisy = add_impulse_noise(clean, NoiseSpec::impulse(0.4, 12));
  const GrayImage out = pwmf(noisy);
  const auto [lo, hi] = std::minmax_element(noisy.pixels().begin(), noisy.pixels().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_GE(out[i], *lo);
    EXPECT_LE(out[i], *hi);
  }
}

TEST(Pwmf, MedianFallbackWhenAllWeightsVanish) {
  // Vertical 0/255 stripes: every ROAD is 2*255, so every weight underflows.
  GrayImage img(11, 11);
  for (int r = 0; r < 11; ++r)
    for (int c = 0; c < 11; ++c) img(r, c) = (c % 2) ? 255.0 : 0.0;
  PwmfParams one_pass;
  one_pass.passes = 1;
  const GrayImage out = pwmf(img, one_pass);
  // Centre window holds 66 zeros and 55 255s.
  EXPECT_EQ(out(5, 5), 0.0);
}

TEST(Pwmf, MildOnSmoothCleanImage) {
  const GrayImage clean = testing::load_crop("moon.pgm", 128);
  const GrayImage out = pwmf(clean);
  double worst = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) worst = std::max(worst, std::abs(out[i] - clean[i]));
  EXPECT_LE(worst, 5.0);
}

// Isolated one-pixel highlights are indistinguishable from impulses, so only
// the bulk of a textured image is required to stay put.
TEST(Pwmf, MostlyMildOnTexturedCleanImages) {
  for (const char* name : {"camera.pgm", "astronaut.pgm", "coffee.pgm"}) {
    const GrayImage clean = testing::load_crop(name, 128);
    const GrayImage out = pwmf(clean);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < out.size(); ++i) moved += std::abs(out[i] - clean[i]) > 5.0;
    EXPECT_LE(static_cast<double>(moved), 0.10 * static_cast<double>(out.size())) << name;
  }
}

TEST(Pwmf, RemovesImpulseNoise) {
  for (const char* name : {"camera.pgm", "astronaut.pgm", "coffee.pgm"}) {
    const GrayImage clean = testing::load_crop(name, 128);
    const GrayImage noisy = add_impulse_noise(clean, NoiseSpec::impulse(0.3, 5));
    const GrayImage out = pwmf(noisy);
    EXPECT_GE(psnr(out, clean), psnr(noisy, clean) + 8.0) << name;
  }
}

TEST(Pwmf, ThreadCountDoesNotChangeOutput) {
  const GrayImage noisy =
      add_impulse_noise(testing::load_crop("camera.pgm", 64), NoiseSpec::impulse(0.3, 5));
  PwmfParams p;
  p.threads = 1;
  const GrayImage serial = pwmf(noisy, p);
  p.threads = 4;
  EXPECT_EQ(pwmf(noisy, p), serial);
}

TEST(Pwmf, RejectsBadParameters) {
  PwmfParams p;
  p.road_neighbors = 9;
  EXPECT_THROW(pwmf(GrayImage(20, 20), p), Error);
  EXPECT_THROW(pwmf(GrayImage(8, 8)), Error);
}

}  // namespace
}  // namespace lrl0
