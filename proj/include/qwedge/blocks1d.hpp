#ifndef QWEDGE_BLOCKS1D_HPP
#define QWEDGE_BLOCKS1D_HPP

#include "qwedge/image.hpp"
#include "qwedge/walk.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qwedge {

/// Tiling of an even-sized image into 2x2 blocks. Inside a block the four
/// pixels form the ring 0 -> 1 -> 2 -> 3 -> 0 over the relative offsets
/// (0,0) -> (1,0) -> (1,1) -> (0,1).
class BlockGrid {
 public:
  static constexpr std::array<std::pair<Index, Index>, 4> kRing{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

  BlockGrid(Index width, Index height);

  Index blocks_x() const { return blocks_x_; }
  Index blocks_y() const { return blocks_y_; }
  Index block_count() const { return blocks_x_ * blocks_y_; }

  /// Pixel (x, y) of ring vertex `vertex` in block (bx, by).
  std::pair<Index, Index> pixel(Index bx, Index by, int vertex) const;
  /// Block containing pixel (x, y).
  std::pair<Index, Index> block_of(Index x, Index y) const { return {x / 2, y / 2}; }

 private:
  Index blocks_x_;
  Index blocks_y_;
};

/// Requires even dimensions.
BlockGrid decompose(const Image& img);

struct BlockRun {
  WalkState<double> state;
  double p_s;
};

/// CG walk on the 4-cycle with coin {r, l, s1, s2}, loop weight s, t steps.
BlockRun run_block(std::span<const Index> marked_local, double s, long t);

struct ShotResult {
  long shots = 0;
  std::uint64_t rng_seed = 0;
  /// Outcome counts indexed vertex * dim + coin.
  std::vector<long> counts;
  int dim = 0;

  /// Marginal counts / shots per vertex.
  Eigen::VectorXd vertex_estimates() const;
};

/// Multinomial draw of `shots` outcomes from |amp|^2.
ShotResult sample(const WalkState<double>& state, long shots, std::uint64_t seed);

struct BlocksParams {
  double s = 0.1;
  long t = 2;
  double a_th = 0.5;
  double p_th = 0.2;
  std::optional<long> shots;
  std::uint64_t seed = 0;
};

struct BlockReport {
  Index block_x;
  Index block_y;
  int m_local;
  double p_s_block;
  std::optional<double> estimated_p;
};

struct BlocksResult {
  Image edges;
  /// Per-pixel probability (exact or shot-estimated) with every block
  /// weighted 1 / block_count, so the map sums to 1.
  ProbabilityMap raw;
  /// Mean p_s over blocks with at least one marked pixel (estimated in shot mode).
  double mean_success = 0.0;
  /// Mean over every block, counting unmarked blocks as 0.
  double mean_success_all = 0.0;
  Index marked_blocks = 0;
  std::vector<BlockReport> blocks;
};

/// Marks with the full-image gradient oracle, runs one block walk per 2x2
/// block and reassembles the per-pixel edge decisions. A pixel is an edge
/// when its block has a marked pixel and its probability is >= p_th.
BlocksResult run_blocks(const Image& img, const BlocksParams& params);

/// Seed of the sampling stream for one block.
std::uint64_t block_seed(std::uint64_t master, Index block_index);

}  // namespace qwedge

#endif  // QWEDGE_BLOCKS1D_HPP
