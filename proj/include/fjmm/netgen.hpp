#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fjmm/types.hpp"

namespace fjmm {

/// Directed arc i -> j ("i is influenced by j") with a positive weight.
struct Arc {
  int target;
  double weight;
};

/// Influence network on nodes 0..n-1. Undirected graphs store each edge as a
/// pair of opposite arcs.
class InfluenceGraph {
 public:
  explicit InfluenceGraph(int n, bool directed = false);

  int size() const noexcept { return static_cast<int>(out_.size()); }
  bool directed() const noexcept { return directed_; }

  /// Adds i -> j (and j -> i when undirected). Re-adding an existing arc
  /// replaces its weight.
  void add_edge(int i, int j, double weight = 1.0);
  bool has_arc(int i, int j) const;

  /// Out-arcs of node i, sorted by target.
  const std::vector<Arc>& out(int i) const { return out_.at(static_cast<std::size_t>(i)); }
  int degree(int i) const { return static_cast<int>(out(i).size()); }

  std::size_t arc_count() const noexcept;
  /// Number of edges: arcs for directed graphs, unordered pairs otherwise.
  std::size_t edge_count() const noexcept;

  bool operator==(const InfluenceGraph& other) const;

 private:
  void insert_arc(int i, int j, double weight);

  bool directed_;
  std::vector<std::vector<Arc>> out_;
};

/// Row-stochastic matrix: nonnegative, every row sums to 1 within 1e-12.
class StochasticMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Validates and wraps m. Throws ValidationError.
  explicit StochasticMatrix(Matrix m, double tolerance = kRowSumTolerance);

  const Matrix& matrix() const noexcept { return m_; }
  int size() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// 0/1 indicator of the positive entries of a weight matrix.
class BinaryAdjacency {
 public:
  explicit BinaryAdjacency(const Matrix& weights);

  const Matrix& matrix() const noexcept { return b_; }
  int size() const noexcept { return static_cast<int>(b_.rows()); }
  std::size_t ones() const;

 private:
  Matrix b_;
};

// Generators. All return undirected graphs without self-loops.

/// Two complete graphs on k nodes joined by the bridge {k-1, k} (0-based).
InfluenceGraph barbell(int k);
InfluenceGraph cycle(int n);
InfluenceGraph complete(int n);

/// G(n, p), resampled until no node is isolated (at most kMaxResamples draws).
InfluenceGraph erdos_renyi(int n, double p, std::uint64_t seed);

/// Ring lattice with k neighbors per node (k even, k < n), each lattice edge
/// rewired with probability p_rewire. Resampled like erdos_renyi when a draw
/// leaves an isolated node.
InfluenceGraph watts_strogatz(int n, int k, double p_rewire, std::uint64_t seed);

inline constexpr int kMaxResamples = 1000;

/// Ring-lattice degree used for the "degree = fraction * n" convention:
/// round(fraction * n), then rounded down to an even number.
int lattice_degree(int n, double fraction);

/// Uniform weights over out-neighbors (weighted graphs: weights normalized by
/// their row sum). Throws NormalizationError naming the first node without
/// neighbors.
StochasticMatrix row_stochastic(const InfluenceGraph& g);

BinaryAdjacency binary_adjacency(const Matrix& w);
inline BinaryAdjacency binary_adjacency(const StochasticMatrix& w) {
  return binary_adjacency(w.matrix());
}

/// Nodes with a directed walk (length >= 0) to some target, where w(i, j) > 0
/// is the arc i -> j. BFS on reversed arcs.
NodeSet reaches_set(const Matrix& w, const NodeSet& targets);
inline NodeSet reaches_set(const StochasticMatrix& w, const NodeSet& targets) {
  return reaches_set(w.matrix(), targets);
}
inline NodeSet reaches_set(const BinaryAdjacency& b, const NodeSet& targets) {
  return reaches_set(b.matrix(), targets);
}

/// True when every node reaches the target set (and the set is non-empty).
bool globally_reachable(const Matrix& w, const NodeSet& targets);

/// Named graph family with its parameters, e.g. "barbell:3", "cycle:20",
/// "complete:50", "erdos-renyi:150:0.4", "watts-strogatz:200:120:0.7".
struct GraphSpec {
  std::string family;
  std::vector<double> params;
  std::uint64_t seed = 0;

  static bool is_family_spec(const std::string& text);
  static GraphSpec parse(const std::string& text, std::uint64_t seed = 0);
  std::string to_string() const;
  InfluenceGraph build() const;
};

}  // namespace fjmm
