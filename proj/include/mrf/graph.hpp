#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mrf {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;  // always stored with first < second

/// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  /// Throws InputError on self-loops, duplicate or out-of-range edges.
  Graph(int n, std::span<const Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const;
  bool has_edge(Vertex u, Vertex v) const;
  bool is_clique(std::span<const Vertex> vertices) const;

  /// Subgraph induced on `keep`; vertex keep[i] becomes i.
  Graph induced(std::span<const Vertex> keep) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

inline Edge make_edge(Vertex u, Vertex v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

/// Random graph with max degree <= d: all pairs are shuffled and an edge is
/// accepted iff both endpoints still have degree < d. Deterministic per seed.
Graph random_bounded_graph(int n, int d, std::uint64_t seed);

/// Uniformly random labelled tree (random attachment order).
Graph random_tree(int n, std::uint64_t seed);

Graph path_graph(int n);
Graph cycle_graph(int n);
/// Hypercube Q_dim; vertices adjacent iff their labels differ in one bit.
Graph hypercube_graph(int dim);

/// Backtracking isomorphism test; intended for the small graphs used in tests
/// and experiments.
bool isomorphic(const Graph& a, const Graph& b);

std::string to_string(const Graph& g);

}  // namespace mrf
