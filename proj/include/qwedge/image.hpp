#ifndef QWEDGE_IMAGE_HPP
#define QWEDGE_IMAGE_HPP

#include <Eigen/Dense>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace qwedge {

/// Row-major real grid, indexed (y, x). Rows run over the image height.
using Grid = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ImageFormat { Pgm, Png };

/// Grayscale image with intensities normalized to [0, 1].
struct Image {
  Grid pixels;
  int source_depth = 8;

  Image() = default;
  Image(Index width, Index height, double fill = 0.0)
      : pixels(Grid::Constant(height, width, fill)) {}
  explicit Image(Grid px, int depth = 8) : pixels(std::move(px)), source_depth(depth) {}

  Index width() const { return pixels.cols(); }
  Index height() const { return pixels.rows(); }
  Index size() const { return pixels.size(); }

  double operator()(Index x, Index y) const { return pixels(y, x); }
  double& operator()(Index x, Index y) { return pixels(y, x); }
};

/// Per-pixel probability field. Values are raw probabilities, not rescaled.
struct ProbabilityMap {
  Grid values;

  ProbabilityMap() = default;
  explicit ProbabilityMap(Grid v) : values(std::move(v)) {}

  Index width() const { return values.cols(); }
  Index height() const { return values.rows(); }
  double total() const { return values.sum(); }
};

ImageFormat format_from_path(const std::filesystem::path& path);

Image load_image(const std::filesystem::path& path, ImageFormat format);
inline Image load_image(const std::filesystem::path& path) {
  return load_image(path, format_from_path(path));
}

/// Odd dimensions grow by one, replicating the last row/column.
Image pad_to_even(const Image& img);

/// 1 where value >= threshold, else 0.
Image binarize(const ProbabilityMap& map, double threshold);

/// Writes intensities quantized to 8 bits (16 when source_depth is 16).
void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
inline void write_image(const Image& img, const std::filesystem::path& path) {
  write_image(img, path, format_from_path(path));
}

/// Writes a probability map rescaled so its maximum is full white. The scale
/// factor is recorded as a PGM comment or a PNG text chunk. Returns the factor.
double write_image(const ProbabilityMap& map, const std::filesystem::path& path,
                   ImageFormat format);
inline double write_image(const ProbabilityMap& map, const std::filesystem::path& path) {
  return write_image(map, path, format_from_path(path));
}

}  // namespace qwedge

#endif  // QWEDGE_IMAGE_HPP
