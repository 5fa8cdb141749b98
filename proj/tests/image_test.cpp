#include "qwedge/image.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>
#include <png.h>

#include <random>

namespace qwedge {
namespace {

using testing::TempDir;
using testing::write_text;

TEST(LoadImage, AsciiPgmScalesByMaxval) {
  TempDir dir;
  write_text(dir / "a.pgm", "P2\n# comment\n2 2\n255\n0 255\n255 0\n");
  const Image img = load_image(dir / "a.pgm");
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(1, 0), 1.0);
  EXPECT_EQ(img(0, 1), 1.0);
  EXPECT_EQ(img(1, 1), 0.0);
  EXPECT_EQ(img.source_depth, 8);
}

TEST(LoadImage, BinaryPgmSinglePixel) {
  TempDir dir;
  write_text(dir / "b.pgm", std::string("P5\n1 1\n255\n") + char(128));
  const Image img = load_image(dir / "b.pgm", ImageFormat::Pgm);
  EXPECT_DOUBLE_EQ(img(0, 0), 128.0 / 255.0);
}

TEST(LoadImage, SixteenBitPgm) {
  TempDir dir;
  write_text(dir / "c.pgm", std::string("P5 2 1 65535\n") + char(0xff) + char(0xff) + char(0x80) + char(0x00));
  const Image img = load_image(dir / "c.pgm");
  EXPECT_EQ(img.source_depth, 16);
  EXPECT_EQ(img(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(img(1, 0), 32768.0 / 65535.0);
}

TEST(LoadImage, Errors) {
  TempDir dir;
  write_text(dir / "trunc.pgm", "P2\n2");
  EXPECT_THROW(
      {
        try {
          load_image(dir / "trunc.pgm");
        } catch (const ImageError& e) {
          EXPECT_STREQ(e.what(), "unreadable file");
          throw;
        }
      },
      ImageError);
  write_text(dir / "short.pgm", "P5\n4 4\n255\nabc");
  EXPECT_THROW(load_image(dir / "short.pgm"), ImageError);
  write_text(dir / "zero.pgm", "P2\n0 3\n255\n");
  EXPECT_THROW(load_image(dir / "zero.pgm"), ImageError);
  write_text(dir / "color.pgm", "P6\n1 1\n255\nabc");
  EXPECT_THROW(load_image(dir / "color.pgm"), ImageError);
  EXPECT_THROW(load_image(dir / "missing.pgm"), ImageError);
  EXPECT_THROW(load_image(dir / "x.bmp"), ImageError);
  write_text(dir / "fake.png", "not a png");
  EXPECT_THROW(load_image(dir / "fake.png"), ImageError);
}

TEST(LoadImage, RejectsRgbPng) {
  TempDir dir;
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = 2;
  desc.height = 1;
  desc.format = PNG_FORMAT_RGB;
  const unsigned char px[6] = {10, 20, 30, 40, 50, 60};
  const auto path = (dir / "rgb.png").string();
  ASSERT_TRUE(png_image_write_to_file(&desc, path.c_str(), 0, px, 0, nullptr));
  EXPECT_THROW(load_image(path), ImageError);
}

TEST(PadToEven, ReplicatesBorder) {
  Image img(3, 4);
  for (Index y = 0; y < 4; ++y) {
    for (Index x = 0; x < 3; ++x) img(x, y) = (10 * y + x) / 100.0;
  }
  const Image p = pad_to_even(img);
  ASSERT_EQ(p.width(), 4);
  ASSERT_EQ(p.height(), 4);
  for (Index y = 0; y < 4; ++y) {
    for (Index x = 0; x < 3; ++x) EXPECT_EQ(p(x, y), img(x, y));
    EXPECT_EQ(p(3, y), img(2, y));
  }
  EXPECT_EQ(pad_to_even(Image(3, 3)).width(), 4);
  EXPECT_EQ(pad_to_even(Image(3, 3)).height(), 4);
  const Image even(4, 6, 0.5);
  EXPECT_TRUE((pad_to_even(even).pixels == even.pixels).all());
}

TEST(PadToEven, Idempotent) {
  std::mt19937_64 rng(1);
  for (Index w = 1; w <= 5; ++w) {
    for (Index h = 1; h <= 5; ++h) {
      const Image once = pad_to_even(testing::random_image(w, h, rng));
      const Image twice = pad_to_even(once);
      EXPECT_TRUE((once.pixels == twice.pixels).all());
    }
  }
}

TEST(Binarize, ThresholdSemantics) {
  ProbabilityMap zero(Grid::Zero(3, 3));
  EXPECT_EQ(binarize(zero, 0.5).pixels.sum(), 0.0);
  EXPECT_EQ(binarize(zero, 0.0).pixels.sum(), 9.0);
  ProbabilityMap one(Grid::Zero(3, 3));
  one.values(1, 2) = 0.9;
  const Image b = binarize(one, 0.5);
  EXPECT_EQ(b.pixels.sum(), 1.0);
  EXPECT_EQ(b(2, 1), 1.0);
  EXPECT_TRUE((b.pixels == 0.0 || b.pixels == 1.0).all());
}

TEST(WriteImage, PgmRoundTripIsExact) {
  TempDir dir;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Image img = testing::random_image(7 + trial, 5, rng);
    write_image(img, dir / "rt.pgm");
    const Image back = load_image(dir / "rt.pgm");
    EXPECT_TRUE((back.pixels == img.pixels).all());
    write_image(img, dir / "rt.png");
    const Image back_png = load_image(dir / "rt.png");
    EXPECT_TRUE((back_png.pixels == img.pixels).all());
  }
}

TEST(WriteImage, SixteenBitPngRoundTrip) {
  TempDir dir;
  Image img(3, 2);
  img.source_depth = 16;
  img.pixels << 0.0, 1.0, 1234.0 / 65535, 40000.0 / 65535, 7.0 / 65535, 0.5 * 65535 / 65535;
  img(2, 1) = 32767.0 / 65535;
  write_image(img, dir / "w.png");
  const Image back = load_image(dir / "w.png");
  EXPECT_EQ(back.source_depth, 16);
  EXPECT_TRUE((back.pixels == img.pixels).all());
}

TEST(WriteImage, BinaryRoundTrip) {
  TempDir dir;
  const Image b = binarize(ProbabilityMap(Grid::Random(6, 4)), 0.0);
  write_image(b, dir / "b.pgm");
  EXPECT_TRUE((load_image(dir / "b.pgm").pixels == b.pixels).all());
}

TEST(WriteImage, ProbabilityMapMaxNormalized) {
  TempDir dir;
  ProbabilityMap uniform(Grid::Constant(2, 3, 1.0 / 6));
  const double scale = write_image(uniform, dir / "u.pgm");
  EXPECT_DOUBLE_EQ(scale, 6.0);
  const Image back = load_image(dir / "u.pgm");
  EXPECT_TRUE((back.pixels == 1.0).all());
  const std::string bytes = testing::read_bytes(dir / "u.pgm");
  EXPECT_NE(bytes.find("# probability map; pixel = value * 6"), std::string::npos);

  ProbabilityMap ramp(Grid::Zero(1, 3));
  ramp.values << 0.0, 0.1, 0.2;
  write_image(ramp, dir / "r.png");
  const Image r = load_image(dir / "r.png");
  EXPECT_EQ(r(2, 0), 1.0);
  EXPECT_EQ(r(1, 0), 128.0 / 255.0);
  EXPECT_EQ(r(0, 0), 0.0);
}

TEST(WriteImage, FailsOnBadPath) {
  EXPECT_THROW(write_image(Image(2, 2), "/nonexistent_dir_qwedge/x.pgm"), ImageError);
}

}  // namespace
}  // namespace qwedge
