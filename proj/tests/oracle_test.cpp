#include "qwedge/oracle.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qwedge {
namespace {

TEST(GradientField, ConstantImageIsZero) {
  EXPECT_EQ(gradient_field(Image(5, 4, 0.7)).gmax.abs().maxCoeff(), 0.0);
}

TEST(GradientField, StepAlongX) {
  Image img(6, 1);
  img.pixels << 0, 0, 0, 1, 1, 1;
  const GradientField f = gradient_field(img);
  Grid expect(1, 6);
  expect << 0, 0, 0, 1, 0, 0;
  EXPECT_TRUE((f.gmax == expect).all());
}

TEST(GradientField, CenterPixel) {
  Image img(3, 3);
  img(1, 1) = 1.0;
  const GradientField f = gradient_field(img);
  // Hand-evaluated: centre has four differences of +1; its 4-neighbours have
  // one difference of -1 and the rest 0 (clamped borders); corners all 0.
  Grid expect = Grid::Zero(3, 3);
  expect(1, 1) = 1.0;
  EXPECT_TRUE((f.gmax == expect).all());
}

TEST(GradientField, TranslationEquivariantAwayFromBorders) {
  std::mt19937_64 rng(9);
  Image base(12, 12);
  base.pixels.block(3, 3, 4, 4) = testing::random_image(4, 4, rng).pixels;
  Image moved(12, 12);
  moved.pixels.block(5, 4, 4, 4) = base.pixels.block(3, 3, 4, 4);
  const Grid a = gradient_field(base).gmax;
  const Grid b = gradient_field(moved).gmax;
  EXPECT_TRUE((a.block(2, 2, 6, 6) == b.block(4, 3, 6, 6)).all());
}

TEST(Mark, ThresholdBehaviour) {
  EXPECT_TRUE(mark(gradient_field(Image(4, 4, 0.3)), 0.1).empty());

  Image step(6, 2);
  step.pixels << 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1;
  const MarkedSet m = mark(gradient_field(step), 0.5);
  ASSERT_EQ(m.size(), 2);
  EXPECT_TRUE(m.contains(3, 0));
  EXPECT_TRUE(m.contains(3, 1));
  EXPECT_EQ(m.coords().front(), std::make_pair(Index{3}, Index{0}));

  EXPECT_TRUE(mark(gradient_field(step), 1.5).empty());
  EXPECT_THROW(mark(gradient_field(step), 0.0), std::invalid_argument);
}

TEST(Mark, MonotoneInThreshold) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> th(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const GradientField f = gradient_field(testing::random_image(9, 7, rng));
    double a = th(rng), b = th(rng);
    if (a > b) std::swap(a, b);
    const MarkedSet lo = mark(f, a);
    const MarkedSet hi = mark(f, b);
    for (Index v : hi.vertices()) EXPECT_TRUE(lo.contains(v % 9, v / 9));
  }
}

TEST(Mark, BinaryImagesIgnoreThresholdInUnitInterval) {
  std::mt19937_64 rng(4);
  Image img(10, 10);
  for (Index i = 0; i < img.size(); ++i) img.pixels.data()[i] = double(rng() % 2);
  const GradientField f = gradient_field(img);
  EXPECT_TRUE((f.gmax == 0.0 || f.gmax == 1.0).all());
  const auto ref = mark(f, 1.0).vertices();
  for (double a : {0.01, 0.3, 0.99}) {
    const auto got = mark(f, a).vertices();
    EXPECT_TRUE(std::equal(ref.begin(), ref.end(), got.begin(), got.end()));
  }
}

TEST(MarkedSet, DeduplicatesAndRangeChecks) {
  const MarkedSet m(3, 2, {5, 1, 5, 0});
  EXPECT_EQ(m.size(), 3);
  EXPECT_EQ(m.to_image().pixels.sum(), 3.0);
  EXPECT_THROW(MarkedSet(3, 2, {6}), std::out_of_range);
}

TEST(Sobel, ConstantImageIsZero) {
  EXPECT_EQ(sobel_magnitude(Image(4, 5, 0.2)).gmax.maxCoeff(), 0.0);
}

TEST(Sobel, VerticalStep) {
  Image img(6, 5);
  img.pixels.rightCols(3).setOnes();
  const Grid g = sobel_magnitude(img).gmax;
  for (Index y = 0; y < 5; ++y) {
    EXPECT_EQ(g(y, 0), 0.0);
    EXPECT_EQ(g(y, 1), 0.0);
    EXPECT_EQ(g(y, 2), 4.0);
    EXPECT_EQ(g(y, 3), 4.0);
    EXPECT_EQ(g(y, 4), 0.0);
    EXPECT_EQ(g(y, 5), 0.0);
  }
}

TEST(Sobel, SinglePixelResponse) {
  Image img(5, 5);
  img(2, 2) = 1.0;
  const Grid g = sobel_magnitude(img).gmax;
  // Hand convolution: edge-adjacent neighbours see weight 2, diagonals see
  // 1 in both directions, the centre itself sees nothing.
  EXPECT_EQ(g(2, 2), 0.0);
  for (auto [x, y] : {std::pair{1, 2}, {3, 2}, {2, 1}, {2, 3}}) EXPECT_EQ(g(y, x), 2.0);
  for (auto [x, y] : {std::pair{1, 1}, {3, 1}, {1, 3}, {3, 3}}) EXPECT_DOUBLE_EQ(g(y, x), std::sqrt(2.0));
  EXPECT_EQ(g(0, 0), 0.0);
}

}  // namespace
}  // namespace qwedge
