#ifndef QWEDGE_ORACLE_HPP
#define QWEDGE_ORACLE_HPP

#include "qwedge/image.hpp"

#include <span>
#include <utility>
#include <vector>

namespace qwedge {

/// Nonnegative per-pixel gradient magnitude.
struct GradientField {
  Grid gmax;

  Index width() const { return gmax.cols(); }
  Index height() const { return gmax.rows(); }
};

/// Marked (edge) vertices. Vertex index of pixel (x, y) is y * width + x;
/// indices are kept sorted and unique.
class MarkedSet {
 public:
  MarkedSet() = default;
  MarkedSet(Index width, Index height, std::vector<Index> vertices);

  Index width() const { return width_; }
  Index height() const { return height_; }
  Index size() const { return static_cast<Index>(vertices_.size()); }
  bool empty() const { return vertices_.empty(); }

  std::span<const Index> vertices() const { return vertices_; }
  bool contains(Index x, Index y) const;
  std::vector<std::pair<Index, Index>> coords() const;

  /// 0/1 image of the marked pixels.
  Image to_image() const;

 private:
  Index width_ = 0;
  Index height_ = 0;
  std::vector<Index> vertices_;
};

/// max(I(x,y) - I(x±1,y), I(x,y) - I(x,y±1)), clamped below at 0, with
/// out-of-range neighbours replaced by the border pixel.
GradientField gradient_field(const Image& img);

/// Pixels with gmax >= a_th. Requires a_th > 0.
MarkedSet mark(const GradientField& field, double a_th);

/// 3x3 Sobel magnitude sqrt(Gx^2 + Gy^2) with clamp-to-edge borders.
GradientField sobel_magnitude(const Image& img);

}  // namespace qwedge

#endif  // QWEDGE_ORACLE_HPP
