#ifndef QWEDGE_LATTICE2D_HPP
#define QWEDGE_LATTICE2D_HPP

#include "qwedge/image.hpp"
#include "qwedge/oracle.hpp"
#include "qwedge/walk.hpp"

#include <vector>

namespace qwedge {

struct WalkParams {
  CoinKind kind = CoinKind::CG;
  double s = 0.01;
  long t = 0;
  double a_th = 0.5;

  void validate() const;
};

/// p_s after every step 0..t of one run.
struct SuccessCurve {
  WalkParams params;
  std::vector<double> values;

  /// First step attaining the global maximum.
  long argmax_t() const;
  double max() const;
};

struct SearchResult {
  SuccessCurve curve;
  WalkState<double> final_state;
  MarkedSet marked;
};

/// Periodic width x height lattice, vertex y * width + x. Directions
/// r = +x, l = -x, u = +y, d = -y.
Topology torus_topology(Index width, Index height);

/// Marks edges with the gradient oracle, starts from the uniform state with a
/// {r, l, u, d, s} coin and runs params.t steps, recording p_s at each step.
SearchResult run_search(const Image& img, const WalkParams& params);

/// Same as above with a precomputed marked set.
SearchResult run_search(const MarkedSet& marked, const WalkParams& params);

/// Per-pixel probability of a final state, reshaped to width x height.
ProbabilityMap edge_map_raw(const WalkState<double>& state, Index width, Index height);
Image edge_map_thresholded(const WalkState<double>& state, Index width, Index height, double p_th);

struct SweepRow {
  CoinKind kind;
  double s;
  long argmax_t;
  double max_p_s;
  SuccessCurve curve;
};

/// One run_search per (kind, s) with horizon t_max, sorted by max p_s
/// descending (ties keep grid order). Cells run concurrently.
std::vector<SweepRow> sweep(const Image& img, const std::vector<CoinKind>& kinds,
                            const std::vector<double>& s_grid, long t_max, double a_th);

}  // namespace qwedge

#endif  // QWEDGE_LATTICE2D_HPP
