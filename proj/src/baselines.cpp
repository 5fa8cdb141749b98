#include "qwedge/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwedge {

AmplitudeVector encode(const Image& img) {
  if (img.size() == 0) throw std::invalid_argument("empty image");
  const double norm = img.pixels.matrix().norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cannot encode an all-zero image");
  Index len = 1;
  while (len < img.size()) len <<= 1;
  AmplitudeVector out{Eigen::VectorXd::Zero(len), img.size()};
  out.c.head(img.size()) = Eigen::Map<const Eigen::VectorXd>(img.pixels.data(), img.size()) / norm;
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> hadamard_pairs(const Eigen::VectorXd& c) {
  if (c.size() % 2) throw std::invalid_argument("amplitude vector length must be even");
  const Index half = c.size() / 2;
  const auto even = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<2>>(c.data(), half);
  const auto odd = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<2>>(c.data() + 1, half);
  return {(even + odd) * std::numbers::sqrt2 / 2, (even - odd) * std::numbers::sqrt2 / 2};
}

HedOutput hed(const Image& img, double a_th) {
  const AmplitudeVector enc = encode(img);
  const Index len = enc.c.size();
  HedOutput out;
  out.edges = Image(img.width(), img.height());
  out.raw = ProbabilityMap(Grid::Zero(img.height(), img.width()));

  if (len < 2) {
    // A single pixel has no pairs.
    out.result.even_gradients = out.result.odd_gradients = Eigen::VectorXd::Zero(0);
    return out;
  }

  Eigen::VectorXd shifted(len);
  shifted.head(len - 1) = enc.c.tail(len - 1);
  shifted(len - 1) = enc.c(0);

  HedResult& r = out.result;
  r.even_gradients = hadamard_pairs(enc.c).second;
  r.odd_gradients = hadamard_pairs(shifted).second;
  r.p_h = r.even_gradients.squaredNorm();
  r.p_h_tilde = r.odd_gradients.squaredNorm();
  r.p_h_bar = (r.p_h + r.p_h_tilde) / 2;

  // Pair (2i, 2i+1) reports at pixel 2i+1; pair (2i+1, 2i+2) at pixel 2i+2.
  auto place = [&](Index pixel, double gradient) {
    pixel %= len;
    if (pixel >= enc.pixels) return;
    out.raw.values.data()[pixel] = gradient * gradient;
    if (std::abs(gradient) * std::numbers::sqrt2 >= a_th) out.edges.pixels.data()[pixel] = 1.0;
  };
  for (Index i = 0; i < len / 2; ++i) {
    place(2 * i + 1, r.even_gradients(i));
    place(2 * i + 2, r.odd_gradients(i));
  }
  return out;
}

Grid normalized_sobel(const Image& img) {
  Grid g = sobel_magnitude(img).gmax;
  const double peak = g.maxCoeff();
  if (peak > 0.0) g /= peak;
  return g;
}

QSobelOutput qsobel(const Image& img, double a_th) {
  const Grid g = normalized_sobel(img);
  QSobelOutput out;
  out.marked = mark(GradientField{g}, a_th);
  out.edges = out.marked.to_image();
  out.raw = ProbabilityMap(Grid::Zero(img.height(), img.width()));
  const auto n = static_cast<double>(img.size());
  for (Index v : out.marked.vertices()) {
    const double s = std::sin(std::numbers::pi / 2 * img.pixels.data()[v]);
    out.raw.values.data()[v] = s * s / n;
    out.p_q += s * s;
  }
  out.p_q /= n;
  out.bound = static_cast<double>(out.marked.size()) / n;
  return out;
}

Image sobel_edges(const Image& img, double a_th) {
  return binarize(ProbabilityMap(normalized_sobel(img)), a_th);
}

}  // namespace qwedge
