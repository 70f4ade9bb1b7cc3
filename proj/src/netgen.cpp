#include "fjmm/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "fjmm/errors.hpp"
#include "fjmm/random.hpp"

namespace fjmm {

InfluenceGraph::InfluenceGraph(int n, bool directed) : directed_(directed) {
  if (n < 1) throw InvalidParameter("graph must have at least one node, got n=" + std::to_string(n));
  out_.resize(static_cast<std::size_t>(n));
}

void InfluenceGraph::insert_arc(int i, int j, double weight) {
  auto& arcs = out_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j,
                             [](const Arc& a, int t) { return a.target < t; });
  if (it != arcs.end() && it->target == j) {
    it->weight = weight;
  } else {
    arcs.insert(it, Arc{j, weight});
  }
}

void InfluenceGraph::add_edge(int i, int j, double weight) {
  if (i < 0 || j < 0 || i >= size() || j >= size()) {
    throw InvalidParameter("edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                           ") has an endpoint outside 1.." + std::to_string(size()));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidParameter("edge weight must be positive and finite");
  }
  insert_arc(i, j, weight);
  if (!directed_ && i != j) insert_arc(j, i, weight);
}

bool InfluenceGraph::has_arc(int i, int j) const {
  const auto& arcs = out(i);
  return std::binary_search(arcs.begin(), arcs.end(), Arc{j, 0.0},
                            [](const Arc& a, const Arc& b) { return a.target < b.target; });
}

std::size_t InfluenceGraph::arc_count() const noexcept {
  std::size_t total = 0;
  for (const auto& arcs : out_) total += arcs.size();
  return total;
}

std::size_t InfluenceGraph::edge_count() const noexcept {
  if (directed_) return arc_count();
  std::size_t loops = 0;
  for (int i = 0; i < size(); ++i) loops += has_arc(i, i) ? 1 : 0;
  return (arc_count() - loops) / 2 + loops;
}

bool InfluenceGraph::operator==(const InfluenceGraph& other) const {
  if (directed_ != other.directed_ || out_.size() != other.out_.size()) return false;
  for (std::size_t i = 0; i < out_.size(); ++i) {
    if (out_[i].size() != other.out_[i].size()) return false;
    for (std::size_t k = 0; k < out_[i].size(); ++k) {
      if (out_[i][k].target != other.out_[i][k].target ||
          out_[i][k].weight != other.out_[i][k].weight) {
        return false;
      }
    }
  }
  return true;
}

StochasticMatrix::StochasticMatrix(Matrix m, double tolerance) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw ValidationError("stochastic matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const double v = m_(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                              ") is negative or non-finite");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i + 1 << " sums to " << sum << ", not 1";
      throw ValidationError(os.str());
    }
  }
}

BinaryAdjacency::BinaryAdjacency(const Matrix& weights)
    : b_((weights.array() > 0.0).cast<double>().matrix()) {}

std::size_t BinaryAdjacency::ones() const { return static_cast<std::size_t>(b_.sum()); }

InfluenceGraph barbell(int k) {
  if (k < 3) throw InvalidParameter("barbell requires k >= 3, got " + std::to_string(k));
  InfluenceGraph g(2 * k);
  for (int side = 0; side < 2; ++side) {
    const int base = side * k;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) g.add_edge(base + i, base + j);
    }
  }
  g.add_edge(k - 1, k);
  return g;
}

InfluenceGraph cycle(int n) {
  if (n < 3) throw InvalidParameter("cycle requires n >= 3, got " + std::to_string(n));
  InfluenceGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

InfluenceGraph complete(int n) {
  if (n < 2) throw InvalidParameter("complete graph requires n >= 2, got " + std::to_string(n));
  InfluenceGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

namespace {

bool has_isolated_node(const InfluenceGraph& g) {
  for (int i = 0; i < g.size(); ++i) {
    if (g.degree(i) == 0) return true;
  }
  return false;
}

template <typename Draw>
InfluenceGraph resample_until_no_isolated(const char* family, Draw&& draw) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    InfluenceGraph g = draw();
    if (!has_isolated_node(g)) return g;
  }
  throw GenerationFailure(std::string(family) + ": every one of " + std::to_string(kMaxResamples) +
                          " draws had an isolated node");
}

}  // namespace

InfluenceGraph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidParameter("erdos_renyi requires n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("erdos_renyi requires 0 <= p <= 1");
  Rng rng(seed);
  return resample_until_no_isolated("erdos_renyi", [&] {
    InfluenceGraph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(p)) g.add_edge(i, j);
      }
    }
    return g;
  });
}

InfluenceGraph watts_strogatz(int n, int k, double p_rewire, std::uint64_t seed) {
  if (n < 3) throw InvalidParameter("watts_strogatz requires n >= 3");
  if (k < 2 || k % 2 != 0 || k >= n) {
    throw InvalidParameter("watts_strogatz requires an even lattice degree 2 <= k < n");
  }
  if (!(p_rewire >= 0.0 && p_rewire <= 1.0)) {
    throw InvalidParameter("watts_strogatz requires 0 <= p_rewire <= 1");
  }
  Rng rng(seed);
  return resample_until_no_isolated("watts_strogatz", [&] {
    // Adjacency as a dense bitmap during rewiring; converted at the end.
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    auto link = [&](int a, int b, char on) {
      adj[a][b] = adj[b][a] = on;
      const int delta = on ? 1 : -1;
      deg[a] += delta;
      deg[b] += delta;
    };
    for (int u = 0; u < n; ++u) {
      for (int j = 1; j <= k / 2; ++j) link(u, (u + j) % n, 1);
    }
    // Rewire lattice edge (u, u+j) to (u, w), w uniform among non-neighbors of u.
    for (int j = 1; j <= k / 2; ++j) {
      for (int u = 0; u < n; ++u) {
        if (!rng.bernoulli(p_rewire)) continue;
        const int v = (u + j) % n;
        if (!adj[u][v] || deg[u] >= n - 1) continue;
        int w;
        do {
          w = rng.below(n);
        } while (w == u || adj[u][w]);
        link(u, v, 0);
        link(u, w, 1);
      }
    }
    InfluenceGraph g(n);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (adj[a][b]) g.add_edge(a, b);
      }
    }
    return g;
  });
}

int lattice_degree(int n, double fraction) {
  const int k = static_cast<int>(std::lround(fraction * n));
  return k - (k % 2);
}

StochasticMatrix row_stochastic(const InfluenceGraph& g) {
  const int n = g.size();
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& arcs = g.out(i);
    if (arcs.empty()) {
      throw NormalizationError(i, "node " + std::to_string(i + 1) +
                                      " has no neighbors; its row of W cannot be normalized");
    }
    double total = 0.0;
    for (const Arc& a : arcs) total += a.weight;
    for (const Arc& a : arcs) w(i, a.target) = a.weight / total;
  }
  return StochasticMatrix(std::move(w));
}

BinaryAdjacency binary_adjacency(const Matrix& w) { return BinaryAdjacency(w); }

NodeSet reaches_set(const Matrix& w, const NodeSet& targets) {
  const auto n = static_cast<int>(w.rows());
  if (w.rows() != w.cols()) throw InvalidParameter("reaches_set requires a square matrix");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<int> queue;
  for (int t : targets) {
    if (t < 0 || t >= n) throw InvalidParameter("target node outside the graph");
    if (!seen[t]) {
      seen[t] = 1;
      queue.push_back(t);
    }
  }
  // Walk arcs i -> j backwards: from j, visit every i with w(i, j) > 0.
  while (!queue.empty()) {
    const int j = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      if (!seen[i] && w(i, j) > 0.0) {
        seen[i] = 1;
        queue.push_back(i);
      }
    }
  }
  NodeSet result;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) result.push_back(i);
  }
  return result;
}

bool globally_reachable(const Matrix& w, const NodeSet& targets) {
  if (targets.empty()) return false;
  return reaches_set(w, targets).size() == static_cast<std::size_t>(w.rows());
}

namespace {

const std::vector<std::pair<std::string, std::size_t>>& families() {
  static const std::vector<std::pair<std::string, std::size_t>> kFamilies = {
      {"barbell", 1}, {"cycle", 1}, {"complete", 1}, {"erdos-renyi", 2}, {"watts-strogatz", 3}};
  return kFamilies;
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

bool GraphSpec::is_family_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  return std::any_of(families().begin(), families().end(),
                     [&](const auto& f) { return f.first == head; });
}

GraphSpec GraphSpec::parse(const std::string& text, std::uint64_t seed) {
  GraphSpec spec;
  spec.seed = seed;
  std::stringstream ss(text);
  std::string token;
  std::getline(ss, spec.family, ':');
  const auto it = std::find_if(families().begin(), families().end(),
                               [&](const auto& f) { return f.first == spec.family; });
  if (it == families().end()) throw InvalidParameter("unknown graph family '" + spec.family + "'");
  while (std::getline(ss, token, ':')) {
    try {
      std::size_t used = 0;
      spec.params.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InvalidParameter("bad numeric parameter '" + token + "' in graph spec '" + text + "'");
    }
  }
  if (spec.params.size() != it->second) {
    throw InvalidParameter("graph family '" + spec.family + "' takes " +
                           std::to_string(it->second) + " parameter(s)");
  }
  return spec;
}

std::string GraphSpec::to_string() const {
  std::string out = family;
  for (double p : params) out += ":" + format_param(p);
  return out;
}

InfluenceGraph GraphSpec::build() const {
  auto as_int = [](double v) {
    if (v != std::floor(v)) throw InvalidParameter("expected an integer graph parameter");
    return static_cast<int>(v);
  };
  if (family == "barbell") return barbell(as_int(params.at(0)));
  if (family == "cycle") return cycle(as_int(params.at(0)));
  if (family == "complete") return complete(as_int(params.at(0)));
  if (family == "erdos-renyi") return erdos_renyi(as_int(params.at(0)), params.at(1), seed);
  if (family == "watts-strogatz") {
    return watts_strogatz(as_int(params.at(0)), as_int(params.at(1)), params.at(2), seed);
  }
  throw InvalidParameter("unknown graph family '" + family + "'");
}

}  // namespace fjmm
