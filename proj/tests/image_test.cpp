#include <cmath>

#include <gtest/gtest.h>

#include "lrl0/image.hpp"
#include "test_support.hpp"

namespace lrl0 {
namespace {

TEST(GrayImage, RejectsBadShapes) {
  EXPECT_THROW(GrayImage(0, 3), Error);
  EXPECT_THROW(GrayImage(2, 2, std::vector<double>{1, 2, 3}), Error);
  EXPECT_THROW(GrayImage(1, 1, std::vector<double>{NAN}), Error);
  EXPECT_THROW(GrayImage(1, 1, std::vector<double>{INFINITY}), Error);
}

TEST(GrayImage, RowMajorIndexing) {
  GrayImage img(3, 2, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(img(1, 0), 3);
  EXPECT_EQ(img(0, 2), 2);
  const GrayImage c = img.crop(1, 1, 2, 1);
  EXPECT_EQ(c.width(), 2);
  EXPECT_EQ(c[0], 4);
  EXPECT_EQ(c[1], 5);
}

TEST(Psnr, IdenticalImagesAreInfinite) {
  const GrayImage x = testing::random_int_image(8, 8, 1);
  EXPECT_TRUE(is_infinite_psnr(psnr(x, x)));
}

TEST(Psnr, FullScaleErrorIsZeroDb) {
  const GrayImage ref = testing::random_int_image(9, 5, 2);
  GrayImage est = ref;
  for (std::size_t i = 0; i < est.size(); ++i) est[i] += 255.0;
  EXPECT_NEAR(psnr(est, ref), 0.0, 1e-12);
}

TEST(Psnr, SinglePixel) {
  const GrayImage est(1, 1, 250.0), ref(1, 1, 255.0);
  const double oracle = 20.0 * std::log10(255.0 * 1.0 / 5.0);
  EXPECT_DOUBLE_EQ(psnr(est, ref), oracle);
  EXPECT_NEAR(psnr(est, ref), 34.1514, 1e-4);
}

TEST(Psnr, SymmetricAndChecksShape) {
  const GrayImage a = testing::random_real_image(7, 6, 3, 0, 255);
  const GrayImage b = testing::random_real_image(7, 6, 4, 0, 255);
  EXPECT_DOUBLE_EQ(psnr(a, b), psnr(b, a));
  EXPECT_THROW(psnr(a, GrayImage(6, 7)), Error);
}

TEST(L0Distance, Examples) {
  const GrayImage a(4, 1, {1, 2, 3, 4}), b(4, 1, {1, 9, 3, 8});
  EXPECT_EQ(l0_distance(a, a), 0u);
  EXPECT_EQ(l0_distance(a, b), 2u);
  GrayImage c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += 0.5;
  EXPECT_EQ(l0_distance(a, c), 4u);
  EXPECT_THROW(l0_distance(a, GrayImage(2, 2)), Error);
}

TEST(L0Distance, MetricAxiomsOnRandomTriples) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    // Few levels so that coincidences actually occur.
    const GrayImage a = testing::random_int_image(6, 6, 3 * s, 0, 2);
    const GrayImage b = testing::random_int_image(6, 6, 3 * s + 1, 0, 2);
    const GrayImage c = testing::random_int_image(6, 6, 3 * s + 2, 0, 2);
    EXPECT_EQ(l0_distance(a, b) == 0, a == b);
    EXPECT_EQ(l0_distance(a, b), l0_distance(b, a));
    EXPECT_LE(l0_distance(a, c), l0_distance(a, b) + l0_distance(b, c));
  }
}

}  // namespace
}  // namespace lrl0
