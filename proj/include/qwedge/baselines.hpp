#ifndef QWEDGE_BASELINES_HPP
#define QWEDGE_BASELINES_HPP

// Comparison detectors: Hadamard edge detection on an amplitude-encoded
// image, the QSobel success-probability model, and classical Sobel.

#include "qwedge/image.hpp"
#include "qwedge/oracle.hpp"

#include <Eigen/Dense>

namespace qwedge {

/// Row-major intensities, L2-normalized, zero-padded to a power of two.
struct AmplitudeVector {
  Eigen::VectorXd c;
  Index pixels = 0;  ///< number of entries that come from the image
};

AmplitudeVector encode(const Image& img);

struct HedResult {
  /// (c_{2i} - c_{2i+1}) / sqrt(2), from the unshifted pass.
  Eigen::VectorXd even_gradients;
  /// (c_{2i+1} - c_{2i+2}) / sqrt(2), indices cyclic, from the shifted pass.
  Eigen::VectorXd odd_gradients;
  double p_h = 0.0;
  double p_h_tilde = 0.0;
  double p_h_bar = 0.0;
};

/// Pairwise Hadamard on the amplitude vector: returns (sum, difference)
/// halves as (c_{2i} + c_{2i+1}) / sqrt(2), (c_{2i} - c_{2i+1}) / sqrt(2).
std::pair<Eigen::VectorXd, Eigen::VectorXd> hadamard_pairs(const Eigen::VectorXd& c);

struct HedOutput {
  HedResult result;
  Image edges;
  ProbabilityMap raw;
};

/// Pixel k is an edge when the difference of the pair ending at k has
/// magnitude >= a_th (in normalized-amplitude units).
HedOutput hed(const Image& img, double a_th);

struct QSobelOutput {
  double p_q = 0.0;
  double bound = 0.0;  ///< M / N
  MarkedSet marked;
  Image edges;
  ProbabilityMap raw;
};

/// Intensity encoded as theta = (pi/2) I; marked set from the max-normalized
/// Sobel magnitude >= a_th; p_q = sum over marked of sin^2(theta) / N.
QSobelOutput qsobel(const Image& img, double a_th);

/// Sobel magnitude scaled so its maximum is 1 (all zero if flat).
Grid normalized_sobel(const Image& img);

Image sobel_edges(const Image& img, double a_th);

}  // namespace qwedge

#endif  // QWEDGE_BASELINES_HPP
