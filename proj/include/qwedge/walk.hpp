#ifndef QWEDGE_WALK_HPP
#define QWEDGE_WALK_HPP

// Coined discrete-time quantum walk with flip-flop shift and weighted
// self-loops. The state is an N x d matrix (vertex-major): row v holds the
// d coin amplitudes of vertex v. Coin basis order is the movement directions
// first, then the self-loops.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwedge {

using Index = Eigen::Index;

enum class CoinKind { GroverLackadaisical, SKW, CG };

inline std::string_view to_string(CoinKind kind) {
  switch (kind) {
    case CoinKind::GroverLackadaisical: return "grover";
    case CoinKind::SKW: return "skw";
    case CoinKind::CG: return "cg";
  }
  throw std::invalid_argument("unknown coin kind");
}

inline CoinKind parse_coin_kind(std::string_view name) {
  if (name == "grover") return CoinKind::GroverLackadaisical;
  if (name == "skw") return CoinKind::SKW;
  if (name == "cg") return CoinKind::CG;
  throw std::invalid_argument("unknown coin kind: " + std::string(name));
}

/// Coin space layout: `moves` movement directions followed by `loops`
/// self-loops sharing a total weight `loop_weight` equally.
struct CoinBasis {
  int moves = 4;
  int loops = 1;
  double loop_weight = 0.0;

  int dim() const { return moves + loops; }

  /// {r, l, u, d, s}
  static CoinBasis lattice2d(double s) { return {4, 1, s}; }
  /// {r, l, s}
  static CoinBasis cycle(double s) { return {2, 1, s}; }
  /// {r, l, s1, s2}, the 2x2-block circuit layout
  static CoinBasis block(double s) { return {2, 2, s}; }

  void validate() const {
    if (moves < 0 || loops < 0 || dim() < 2) throw std::invalid_argument("coin dimension < 2");
    if (!(loop_weight >= 0.0)) throw std::invalid_argument("negative self-loop weight");
    if (loops == 0 && loop_weight != 0.0) {
      throw std::invalid_argument("self-loop weight without self-loops");
    }
  }
};

/// Normalized coin reference state: 1 on each direction, sqrt(s / loops) on
/// each loop, divided by sqrt(moves + s).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coin_state(const CoinBasis& coin) {
  coin.validate();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> psi(coin.dim());
  psi.head(coin.moves).setOnes();
  if (coin.loops > 0) {
    psi.tail(coin.loops).setConstant(std::sqrt(Scalar(coin.loop_weight) / Scalar(coin.loops)));
  }
  return psi / std::sqrt(Scalar(coin.moves) + Scalar(coin.loop_weight));
}

/// Grover diffusion 2|psi_c><psi_c| - I about the coin reference state.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> grover_coin_matrix(const CoinBasis& coin) {
  const auto psi = coin_state<Scalar>(coin);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return Scalar(2) * psi * psi.transpose() - Mat::Identity(coin.dim(), coin.dim());
}

/// Flip-flop neighbour structure: moving from v along direction k lands on
/// neighbor(v, k) with direction label reverse(k).
class Topology {
 public:
  Topology(Index vertices, int moves, std::vector<Index> targets, std::vector<int> reverse)
      : vertices_(vertices), moves_(moves), targets_(std::move(targets)), reverse_(std::move(reverse)) {
    if (vertices_ < 1) throw std::invalid_argument("topology needs at least one vertex");
    if (static_cast<Index>(targets_.size()) != vertices_ * moves_ ||
        static_cast<int>(reverse_.size()) != moves_) {
      throw std::invalid_argument("topology tables have the wrong size");
    }
    for (int k = 0; k < moves_; ++k) {
      if (reverse_[k] < 0 || reverse_[k] >= moves_ || reverse_[reverse_[k]] != k) {
        throw std::invalid_argument("inconsistent topology: reverse is not an involution");
      }
    }
    for (Index v = 0; v < vertices_; ++v) {
      for (int k = 0; k < moves_; ++k) {
        const Index u = neighbor(v, k);
        if (u < 0 || u >= vertices_ || neighbor(u, reverse_[k]) != v) {
          throw std::invalid_argument("inconsistent topology: edge is not reversible");
        }
      }
    }
  }

  Index vertices() const { return vertices_; }
  int moves() const { return moves_; }
  Index neighbor(Index v, int dir) const { return targets_[v * moves_ + dir]; }
  int reverse(int dir) const { return reverse_[dir]; }

 private:
  Index vertices_;
  int moves_;
  std::vector<Index> targets_;
  std::vector<int> reverse_;
};

/// Cycle 0 -> 1 -> ... -> n-1 -> 0; direction 0 steps forward, 1 backward.
inline Topology cycle_topology(Index n) {
  if (n < 1) throw std::invalid_argument("cycle needs at least one vertex");
  std::vector<Index> targets(static_cast<std::size_t>(2 * n));
  for (Index v = 0; v < n; ++v) {
    targets[2 * v] = (v + 1) % n;
    targets[2 * v + 1] = (v + n - 1) % n;
  }
  return Topology(n, 2, std::move(targets), {1, 0});
}

template <typename Scalar = double>
class WalkState {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  WalkState(Index vertices, CoinBasis coin) : coin_(coin) {
    coin_.validate();
    if (vertices < 1) throw std::invalid_argument("walk needs at least one vertex");
    amps_ = Amplitudes::Zero(vertices, coin_.dim());
  }

  /// psi_v (x) psi_c: 1/sqrt(N) on every vertex times the coin reference state.
  static WalkState uniform(Index vertices, CoinBasis coin) {
    WalkState s(vertices, coin);
    const Eigen::Matrix<Complex, Eigen::Dynamic, 1> psi = coin_state<Scalar>(coin).template cast<Complex>();
    const Scalar vertex_amp = Scalar(1) / std::sqrt(Scalar(vertices));
    s.amps_.rowwise() = vertex_amp * psi.transpose();
    return s;
  }

  Index vertices() const { return amps_.rows(); }
  int dim() const { return coin_.dim(); }
  const CoinBasis& coin() const { return coin_; }

  Amplitudes& amplitudes() { return amps_; }
  const Amplitudes& amplitudes() const { return amps_; }

  Complex operator()(Index vertex, int coin_index) const { return amps_(vertex, coin_index); }

  Scalar norm_squared() const { return amps_.squaredNorm(); }

 private:
  CoinBasis coin_;
  Amplitudes amps_;
};

template <typename Scalar = double>
WalkState<Scalar> uniform_state(Index vertices, const CoinBasis& coin) {
  return WalkState<Scalar>::uniform(vertices, coin);
}

namespace detail {

inline void check_marked(std::span<const Index> marked, Index vertices) {
  for (Index v : marked) {
    if (v < 0 || v >= vertices) throw std::out_of_range("marked vertex index out of range");
  }
}

/// out = coin(in). `in` receives the marking phase; `out` must not alias it.
template <typename Scalar, typename Amps, typename CoinMat>
void coin_into(Amps& in, Amps& out, std::span<const Index> marked, CoinKind kind,
               const CoinBasis& coin, const CoinMat& diffusion) {
  switch (kind) {
    case CoinKind::CG:
      for (Index v : marked) in.row(v).tail(coin.loops) *= Scalar(-1);
      out.noalias() = in * diffusion;
      break;
    case CoinKind::GroverLackadaisical:
      for (Index v : marked) in.row(v) *= Scalar(-1);
      out.noalias() = in * diffusion;
      break;
    case CoinKind::SKW:
      out.noalias() = in * diffusion;
      for (Index v : marked) out.row(v) = -in.row(v);
      break;
    default:
      throw std::invalid_argument("unknown coin kind");
  }
}

/// Destination slot (v * d + k) of every amplitude slot under the flip-flop shift.
inline std::vector<Index> shift_permutation(const Topology& topology, const CoinBasis& coin) {
  if (topology.moves() != coin.moves) {
    throw std::invalid_argument("topology and coin disagree on the number of directions");
  }
  const Index d = coin.dim();
  std::vector<Index> dest(static_cast<std::size_t>(topology.vertices() * d));
  for (Index v = 0; v < topology.vertices(); ++v) {
    for (int k = 0; k < coin.moves; ++k) {
      dest[v * d + k] = topology.neighbor(v, k) * d + topology.reverse(k);
    }
    for (int k = coin.moves; k < d; ++k) dest[v * d + k] = v * d + k;
  }
  return dest;
}

template <typename Amps>
void scatter(const Amps& in, Amps& out, const std::vector<Index>& dest) {
  const auto* src = in.data();
  auto* dst = out.data();
  const auto n = static_cast<Index>(dest.size());
  for (Index p = 0; p < n; ++p) dst[dest[p]] = src[p];
}

}  // namespace detail

/// One application of the (possibly marked) coin at every vertex.
///  CG:     marked vertices flip the sign of their self-loop amplitudes, then C.
///  Grover: marked vertices flip all d amplitudes, then C.
///  SKW:    marked vertices get -I; unmarked get C.
template <typename Scalar>
WalkState<Scalar> apply_coin(WalkState<Scalar> state, std::span<const Index> marked, CoinKind kind) {
  detail::check_marked(marked, state.vertices());
  using Complex = typename WalkState<Scalar>::Complex;
  const auto diffusion = grover_coin_matrix<Scalar>(state.coin()).template cast<Complex>().eval();
  typename WalkState<Scalar>::Amplitudes out(state.vertices(), state.dim());
  detail::coin_into<Scalar>(state.amplitudes(), out, marked, kind, state.coin(), diffusion);
  state.amplitudes() = std::move(out);
  return state;
}

/// Flip-flop shift: (v, k) -> (neighbor(v, k), reverse(k)); self-loops stay.
template <typename Scalar>
WalkState<Scalar> apply_shift(const WalkState<Scalar>& state, const Topology& topology) {
  if (topology.vertices() != state.vertices()) {
    throw std::invalid_argument("topology size does not match state");
  }
  const auto dest = detail::shift_permutation(topology, state.coin());
  WalkState<Scalar> out(state.vertices(), state.coin());
  detail::scatter(state.amplitudes(), out.amplitudes(), dest);
  return out;
}

/// U = S * C_kind.
template <typename Scalar>
WalkState<Scalar> step(const WalkState<Scalar>& state, std::span<const Index> marked, CoinKind kind,
                       const Topology& topology) {
  return apply_shift(apply_coin(state, marked, kind), topology);
}

/// Total probability on the marked vertices, summed over all coin states.
template <typename Scalar>
Scalar success_probability(const WalkState<Scalar>& state, std::span<const Index> marked) {
  Scalar p = 0;
  for (Index v : marked) p += state.amplitudes().row(v).squaredNorm();
  return p;
}

/// Per-vertex probability, summed over the coin.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probability_map(const WalkState<Scalar>& state) {
  return state.amplitudes().cwiseAbs2().rowwise().sum();
}

/// Repeated evolution with the coin matrix and shift permutation computed
/// once. Produces the same amplitudes as iterating `step`.
template <typename Scalar = double>
class Walker {
 public:
  using State = WalkState<Scalar>;
  using Complex = typename State::Complex;

  Walker(State initial, std::vector<Index> marked, CoinKind kind, const Topology& topology)
      : state_(std::move(initial)),
        scratch_(state_),
        marked_(std::move(marked)),
        kind_(kind),
        dest_(detail::shift_permutation(topology, state_.coin())),
        diffusion_(grover_coin_matrix<Scalar>(state_.coin()).template cast<Complex>()) {
    if (topology.vertices() != state_.vertices()) {
      throw std::invalid_argument("topology size does not match state");
    }
    detail::check_marked(marked_, state_.vertices());
    std::sort(marked_.begin(), marked_.end());
    marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
  }

  void step() {
    detail::coin_into<Scalar>(state_.amplitudes(), scratch_.amplitudes(), marked_, kind_,
                              state_.coin(), diffusion_);
    detail::scatter(scratch_.amplitudes(), state_.amplitudes(), dest_);
    ++steps_;
  }

  void evolve(long steps) {
    for (long i = 0; i < steps; ++i) step();
  }

  Scalar success_probability() const { return qwedge::success_probability(state_, marked_); }

  const State& state() const { return state_; }
  std::span<const Index> marked() const { return marked_; }
  long steps_taken() const { return steps_; }

 private:
  State state_;
  State scratch_;
  std::vector<Index> marked_;
  CoinKind kind_;
  std::vector<Index> dest_;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> diffusion_;
  long steps_ = 0;
};

}  // namespace qwedge

#endif  // QWEDGE_WALK_HPP
