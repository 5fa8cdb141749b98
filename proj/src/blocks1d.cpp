#include "qwedge/blocks1d.hpp"

#include "qwedge/oracle.hpp"

#include <random>
#include <stdexcept>

namespace qwedge {

BlockGrid::BlockGrid(Index width, Index height) : blocks_x_(width / 2), blocks_y_(height / 2) {
  if (width < 2 || height < 2 || width % 2 || height % 2) {
    throw std::invalid_argument("block decomposition needs even image dimensions");
  }
}

std::pair<Index, Index> BlockGrid::pixel(Index bx, Index by, int vertex) const {
  const auto [dx, dy] = kRing.at(static_cast<std::size_t>(vertex));
  return {2 * bx + dx, 2 * by + dy};
}

BlockGrid decompose(const Image& img) { return BlockGrid(img.width(), img.height()); }

BlockRun run_block(std::span<const Index> marked_local, double s, long t) {
  if (t < 0) throw std::invalid_argument("iteration count must be >= 0");
  Walker<double> walker(WalkState<double>::uniform(4, CoinBasis::block(s)),
                        {marked_local.begin(), marked_local.end()}, CoinKind::CG, cycle_topology(4));
  walker.evolve(t);
  return {walker.state(), walker.success_probability()};
}

Eigen::VectorXd ShotResult::vertex_estimates() const {
  const Index n = dim ? static_cast<Index>(counts.size()) / dim : 0;
  Eigen::VectorXd est = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < static_cast<Index>(counts.size()); ++i) {
    est(i / dim) += static_cast<double>(counts[i]);
  }
  return shots > 0 ? Eigen::VectorXd(est / static_cast<double>(shots)) : est;
}

ShotResult sample(const WalkState<double>& state, long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const auto& amps = state.amplitudes();
  std::vector<double> weights(static_cast<std::size_t>(amps.size()));
  for (Index i = 0; i < amps.size(); ++i) weights[i] = std::norm(amps.data()[i]);

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  ShotResult r{shots, seed, std::vector<long>(weights.size(), 0), state.dim()};
  for (long i = 0; i < shots; ++i) ++r.counts[dist(rng)];
  return r;
}

std::uint64_t block_seed(std::uint64_t master, Index block_index) {
  // splitmix64 finalizer over (master, index)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(block_index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

BlocksResult run_blocks(const Image& img, const BlocksParams& params) {
  const BlockGrid grid = decompose(img);
  if (params.shots && *params.shots < 1) throw std::invalid_argument("shots must be >= 1");
  const GradientField field = gradient_field(img);
  const MarkedSet marked = mark(field, params.a_th);

  BlocksResult out;
  out.raw = ProbabilityMap(Grid::Zero(img.height(), img.width()));
  out.edges = Image(img.width(), img.height());
  out.blocks.reserve(static_cast<std::size_t>(grid.block_count()));

  double sum_marked = 0.0;
  for (Index by = 0; by < grid.blocks_y(); ++by) {
    for (Index bx = 0; bx < grid.blocks_x(); ++bx) {
      std::vector<Index> local;
      for (int v = 0; v < 4; ++v) {
        const auto [x, y] = grid.pixel(bx, by, v);
        if (marked.contains(x, y)) local.push_back(v);
      }
      const BlockRun run = run_block(local, params.s, params.t);

      Eigen::VectorXd pixel_p = probability_map(run.state);
      BlockReport report{bx, by, static_cast<int>(local.size()), run.p_s, std::nullopt};
      double block_metric = run.p_s;
      if (params.shots) {
        const Index index = by * grid.blocks_x() + bx;
        const ShotResult shots = sample(run.state, *params.shots, block_seed(params.seed, index));
        pixel_p = shots.vertex_estimates();
        double est = 0.0;
        for (Index v : local) est += pixel_p(v);
        report.estimated_p = est;
        block_metric = est;
      }
      // A block without marked pixels stays uniform and reports no edge.
      for (int v = 0; v < 4; ++v) {
        const auto [x, y] = grid.pixel(bx, by, v);
        out.raw.values(y, x) = pixel_p(v);
        if (!local.empty() && pixel_p(v) >= params.p_th) out.edges(x, y) = 1.0;
      }
      if (!local.empty()) {
        sum_marked += block_metric;
        ++out.marked_blocks;
      }
      out.mean_success_all += block_metric;
      out.blocks.push_back(report);
    }
  }
  out.mean_success = out.marked_blocks ? sum_marked / static_cast<double>(out.marked_blocks) : 0.0;
  out.mean_success_all /= static_cast<double>(grid.block_count());
  out.raw.values /= static_cast<double>(grid.block_count());
  return out;
}

}  // namespace qwedge
