#include "qwedge/lattice2d.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <thread>

namespace qwedge {

void WalkParams::validate() const {
  if (t < 0) throw std::invalid_argument("iteration count must be >= 0");
  if (!(s >= 0.0)) throw std::invalid_argument("self-loop weight must be >= 0");
  if (!(a_th > 0.0)) throw std::invalid_argument("threshold must be positive");
}

long SuccessCurve::argmax_t() const {
  if (values.empty()) return 0;
  return static_cast<long>(std::max_element(values.begin(), values.end()) - values.begin());
}

double SuccessCurve::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

Topology torus_topology(Index width, Index height) {
  if (width < 1 || height < 1) throw std::invalid_argument("torus dimensions must be >= 1");
  std::vector<Index> targets(static_cast<std::size_t>(width * height * 4));
  for (Index y = 0; y < height; ++y) {
    for (Index x = 0; x < width; ++x) {
      const Index v = y * width + x;
      targets[4 * v + 0] = y * width + (x + 1) % width;
      targets[4 * v + 1] = y * width + (x + width - 1) % width;
      targets[4 * v + 2] = ((y + 1) % height) * width + x;
      targets[4 * v + 3] = ((y + height - 1) % height) * width + x;
    }
  }
  return Topology(width * height, 4, std::move(targets), {1, 0, 3, 2});
}

SearchResult run_search(const MarkedSet& marked, const WalkParams& params) {
  params.validate();
  const Index n = marked.width() * marked.height();
  const auto coin = CoinBasis::lattice2d(params.s);
  Walker<double> walker(WalkState<double>::uniform(n, coin),
                        {marked.vertices().begin(), marked.vertices().end()}, params.kind,
                        torus_topology(marked.width(), marked.height()));

  SuccessCurve curve{params, {}};
  curve.values.reserve(static_cast<std::size_t>(params.t) + 1);
  curve.values.push_back(walker.success_probability());
  for (long i = 0; i < params.t; ++i) {
    walker.step();
    curve.values.push_back(walker.success_probability());
  }
  return SearchResult{std::move(curve), walker.state(), marked};
}

SearchResult run_search(const Image& img, const WalkParams& params) {
  params.validate();
  return run_search(mark(gradient_field(img), params.a_th), params);
}

ProbabilityMap edge_map_raw(const WalkState<double>& state, Index width, Index height) {
  if (width * height != state.vertices()) {
    throw std::invalid_argument("map dimensions do not match state");
  }
  const Eigen::VectorXd p = probability_map(state);
  return ProbabilityMap(Eigen::Map<const Grid>(p.data(), height, width));
}

Image edge_map_thresholded(const WalkState<double>& state, Index width, Index height, double p_th) {
  return binarize(edge_map_raw(state, width, height), p_th);
}

std::vector<SweepRow> sweep(const Image& img, const std::vector<CoinKind>& kinds,
                            const std::vector<double>& s_grid, long t_max, double a_th) {
  if (kinds.empty() || s_grid.empty()) throw std::invalid_argument("sweep grids must be nonempty");
  const MarkedSet marked = mark(gradient_field(img), a_th);

  struct Cell {
    CoinKind kind;
    double s;
  };
  std::vector<Cell> cells;
  for (CoinKind k : kinds) {
    for (double s : s_grid) cells.push_back({k, s});
  }

  std::vector<SweepRow> rows(cells.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(cells.size(), std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < cells.size(); i += workers) {
        WalkParams p{cells[i].kind, cells[i].s, t_max, a_th};
        SuccessCurve curve = run_search(marked, p).curve;
        rows[i] = SweepRow{cells[i].kind, cells[i].s, curve.argmax_t(), curve.max(), std::move(curve)};
      }
    }));
  }
  for (auto& j : jobs) j.get();

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.max_p_s > b.max_p_s; });
  return rows;
}

}  // namespace qwedge
