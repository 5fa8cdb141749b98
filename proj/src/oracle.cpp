#include "qwedge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwedge {

MarkedSet::MarkedSet(Index width, Index height, std::vector<Index> vertices)
    : width_(width), height_(height), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  if (!vertices_.empty() && (vertices_.front() < 0 || vertices_.back() >= width * height)) {
    throw std::out_of_range("marked vertex outside lattice");
  }
}

bool MarkedSet::contains(Index x, Index y) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), y * width_ + x);
}

std::vector<std::pair<Index, Index>> MarkedSet::coords() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(vertices_.size());
  for (Index v : vertices_) out.emplace_back(v % width_, v / width_);
  return out;
}

Image MarkedSet::to_image() const {
  Image img(width_, height_);
  for (Index v : vertices_) img.pixels.data()[v] = 1.0;
  return img;
}

GradientField gradient_field(const Image& img) {
  if (img.size() == 0) throw std::invalid_argument("empty image");
  const Index w = img.width();
  const Index h = img.height();
  GradientField f{Grid::Zero(h, w)};
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const double c = img(x, y);
      const double hp = c - img(std::min(x + 1, w - 1), y);
      const double hm = c - img(std::max<Index>(x - 1, 0), y);
      const double vp = c - img(x, std::min(y + 1, h - 1));
      const double vm = c - img(x, std::max<Index>(y - 1, 0));
      f.gmax(y, x) = std::max({hp, hm, vp, vm, 0.0});
    }
  }
  return f;
}

MarkedSet mark(const GradientField& field, double a_th) {
  if (!(a_th > 0.0)) throw std::invalid_argument("threshold must be positive");
  std::vector<Index> hits;
  for (Index i = 0; i < field.gmax.size(); ++i) {
    if (field.gmax.data()[i] >= a_th) hits.push_back(i);
  }
  return MarkedSet(field.width(), field.height(), std::move(hits));
}

GradientField sobel_magnitude(const Image& img) {
  if (img.size() == 0) throw std::invalid_argument("empty image");
  const Index w = img.width();
  const Index h = img.height();
  auto at = [&](Index x, Index y) {
    return img(std::clamp<Index>(x, 0, w - 1), std::clamp<Index>(y, 0, h - 1));
  };
  GradientField f{Grid::Zero(h, w)};
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const double gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      f.gmax(y, x) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return f;
}

}  // namespace qwedge
