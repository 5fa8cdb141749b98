#include "qwedge/blocks1d.hpp"

#include "dense_oracle.hpp"
#include "qwedge/oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>

namespace qwedge {
namespace {

TEST(Decompose, BlockCounts) {
  EXPECT_EQ(decompose(Image(4, 6)).block_count(), 6);
  const BlockGrid one = decompose(Image(2, 2));
  EXPECT_EQ(one.block_count(), 1);
  std::set<std::pair<Index, Index>> seen;
  for (int v = 0; v < 4; ++v) seen.insert(one.pixel(0, 0, v));
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(decompose(Image(6, 6)).block_of(3, 5), std::make_pair(Index{1}, Index{2}));
  EXPECT_THROW(decompose(Image(3, 4)), std::invalid_argument);
}

TEST(Decompose, RingOrderAndCoverage) {
  const BlockGrid g = decompose(Image(6, 4));
  EXPECT_EQ(g.pixel(1, 1, 0), std::make_pair(Index{2}, Index{2}));
  EXPECT_EQ(g.pixel(1, 1, 1), std::make_pair(Index{3}, Index{2}));
  EXPECT_EQ(g.pixel(1, 1, 2), std::make_pair(Index{3}, Index{3}));
  EXPECT_EQ(g.pixel(1, 1, 3), std::make_pair(Index{2}, Index{3}));
  Grid hits = Grid::Zero(4, 6);
  for (Index by = 0; by < g.blocks_y(); ++by) {
    for (Index bx = 0; bx < g.blocks_x(); ++bx) {
      for (int v = 0; v < 4; ++v) {
        const auto [x, y] = g.pixel(bx, by, v);
        hits(y, x) += 1;
        EXPECT_EQ(g.block_of(x, y), std::make_pair(bx, by));
      }
    }
  }
  EXPECT_TRUE((hits == 1.0).all());
}

TEST(RunBlock, EmptyMarkedIsStationary) {
  const BlockRun r = run_block({}, 0.1, 5);
  EXPECT_EQ(r.p_s, 0.0);
  const auto init = uniform_state(4, CoinBasis::block(0.1));
  EXPECT_LT((r.state.amplitudes() - init.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RunBlock, SingleMarkedMatchesDenseOracle) {
  const std::vector<Index> marked{0};
  const BlockRun r = run_block(marked, 0.1, 2);
  const auto g = dense::cycle(4, 2, 0.1);
  const auto ref = dense::trajectory(g, {0}, dense::Kind::CG, 2);
  for (Index i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(r.state.amplitudes().data()[i] - ref[2](i)), 0.0, 1e-10);
  EXPECT_NEAR(r.p_s, 0.4778298210548653, 1e-12);
}

TEST(RunBlock, AllMarkedIsCertain) {
  const std::vector<Index> all{0, 1, 2, 3};
  for (long t : {0L, 1L, 2L, 9L}) EXPECT_NEAR(run_block(all, 0.1, t).p_s, 1.0, 1e-12);
}

TEST(Sample, DeterministicState) {
  WalkState<double> s(4, CoinBasis::block(0.1));
  s.amplitudes()(2, 1) = 1.0;
  const ShotResult r = sample(s, 500, 1);
  EXPECT_EQ(r.counts[2 * 4 + 1], 500);
  EXPECT_EQ(r.vertex_estimates()(2), 1.0);
  EXPECT_THROW(sample(s, 0, 1), std::invalid_argument);
}

TEST(Sample, SeedDeterminismAndAccuracy) {
  const std::vector<Index> marked{1};
  const BlockRun run = run_block(marked, 0.1, 2);
  const ShotResult a = sample(run.state, 100000, 42);
  const ShotResult b = sample(run.state, 100000, 42);
  EXPECT_EQ(a.counts, b.counts);
  long total = 0;
  for (long c : a.counts) total += c;
  EXPECT_EQ(total, 100000);
  const Eigen::VectorXd exact = probability_map(run.state);
  const Eigen::VectorXd est = a.vertex_estimates();
  for (Index v = 0; v < 4; ++v) EXPECT_NEAR(est(v), exact(v), 0.01);
}

TEST(BlockSeed, DistinctPerBlock) {
  std::set<std::uint64_t> seeds;
  for (Index i = 0; i < 1000; ++i) seeds.insert(block_seed(7, i));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(block_seed(7, 0), block_seed(8, 0));
}

TEST(RunBlocks, ConstantImage) {
  const BlocksResult r = run_blocks(Image(6, 4, 0.5), {});
  EXPECT_EQ(r.marked_blocks, 0);
  EXPECT_EQ(r.mean_success, 0.0);
  EXPECT_EQ(r.edges.pixels.sum(), 0.0);
  EXPECT_EQ(r.blocks.size(), 6u);
}

TEST(RunBlocks, ExactModeAveragesMarkedBlocks) {
  const Image img = testing::filled_rect(8, 8, 2, 1, 7, 6);
  const BlocksResult r = run_blocks(img, {0.1, 2, 0.5, 0.2, std::nullopt, 0});
  const MarkedSet marked = mark(gradient_field(img), 0.5);

  double sum = 0.0, sum_all = 0.0;
  Index count = 0, m = 0;
  for (const BlockReport& b : r.blocks) {
    std::vector<Index> local;
    for (int v = 0; v < 4; ++v) {
      const auto [x, y] = BlockGrid(8, 8).pixel(b.block_x, b.block_y, v);
      if (marked.contains(x, y)) local.push_back(v);
    }
    EXPECT_EQ(b.m_local, static_cast<int>(local.size()));
    EXPECT_DOUBLE_EQ(b.p_s_block, run_block(local, 0.1, 2).p_s);
    EXPECT_FALSE(b.estimated_p.has_value());
    m += b.m_local;
    sum_all += b.p_s_block;
    if (b.m_local > 0) {
      sum += b.p_s_block;
      ++count;
    }
  }
  EXPECT_EQ(m, marked.size());
  EXPECT_EQ(r.marked_blocks, count);
  EXPECT_NEAR(r.mean_success, sum / count, 1e-15);
  EXPECT_NEAR(r.mean_success_all, sum_all / 16, 1e-15);
  EXPECT_GT(r.mean_success, 0.0);
  EXPECT_LE(r.mean_success, 1.0);
  EXPECT_NEAR(r.raw.total(), 1.0, 1e-12);

  // Under the default p_th every marked pixel and no unmarked pixel survives
  // (t = 2, s = 0.1: marked >= 0.25, unmarked <= 0.176 for any block pattern).
  EXPECT_TRUE((r.edges.pixels == marked.to_image().pixels).all());

  const BlocksResult again = run_blocks(img, {0.1, 2, 0.5, 0.2, std::nullopt, 0});
  EXPECT_TRUE((again.edges.pixels == r.edges.pixels).all());
  EXPECT_EQ(again.mean_success, r.mean_success);
}

TEST(RunBlocks, ShotModeIsSeeded) {
  const Image img = testing::filled_rect(8, 6, 1, 1, 6, 5);
  const BlocksParams p{0.1, 2, 0.5, 0.2, 2000L, 99};
  const BlocksResult a = run_blocks(img, p);
  const BlocksResult b = run_blocks(img, p);
  EXPECT_TRUE((a.raw.values == b.raw.values).all());
  EXPECT_EQ(a.mean_success, b.mean_success);
  for (const BlockReport& r : a.blocks) ASSERT_TRUE(r.estimated_p.has_value());
  BlocksParams other = p;
  other.seed = 100;
  EXPECT_FALSE((run_blocks(img, other).raw.values == a.raw.values).all());
  EXPECT_THROW(run_blocks(img, {0.1, 2, 0.5, 0.2, 0L, 1}), std::invalid_argument);
}

TEST(RunBlocks, ShotModeConvergesToExactEdges) {
  // p_th = 0.2 sits > 50 sigma from every per-pixel probability at 1e6 shots.
  const Image img = testing::filled_rect(8, 8, 1, 2, 6, 7);
  const BlocksResult exact = run_blocks(img, {});
  const BlocksResult shots = run_blocks(img, {0.1, 2, 0.5, 0.2, 1000000L, 3});
  EXPECT_TRUE((shots.edges.pixels == exact.edges.pixels).all());
  EXPECT_LT((shots.raw.values - exact.raw.values).abs().maxCoeff(), 1e-3);
}

}  // namespace
}  // namespace qwedge
