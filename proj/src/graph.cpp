#include "mrf/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mrf/errors.hpp"
#include "mrf/random.hpp"

namespace mrf {

Graph::Graph(int n) : n_(n), adj_(n) {
  if (n < 0) throw InputError("graph: negative vertex count");
}

Graph::Graph(int n, std::span<const Edge> edges) : Graph(n) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw InputError("graph: edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") out of range for n=" + std::to_string(n));
    }
    if (a == b) throw InputError("graph: self-loop at " + std::to_string(a));
    edges_.push_back(make_edge(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InputError("graph: duplicate edge (" + std::to_string(dup->first) + "," +
                     std::to_string(dup->second) + ")");
  }
  for (auto [a, b] : edges_) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

int Graph::max_degree() const {
  int best = 0;
  for (const auto& nb : adj_) best = std::max(best, static_cast<int>(nb.size()));
  return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

bool Graph::is_clique(std::span<const Vertex> vertices) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (!has_edge(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

Graph Graph::induced(std::span<const Vertex> keep) const {
  std::vector<int> relabel(n_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<int>(i);
  std::vector<Edge> kept;
  for (auto [a, b] : edges_) {
    if (relabel[a] >= 0 && relabel[b] >= 0) kept.push_back(make_edge(relabel[a], relabel[b]));
  }
  return Graph(static_cast<int>(keep.size()), kept);
}

Graph random_bounded_graph(int n, int d, std::uint64_t seed) {
  if (n < 1) throw InputError("random_bounded_graph: n must be >= 1");
  if (d < 0) throw InputError("random_bounded_graph: d must be >= 0");
  std::vector<Edge> candidates;
  candidates.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) candidates.emplace_back(u, v);
  }
  Rng rng(seed);
  rng.shuffle(candidates);
  std::vector<int> degree(n, 0);
  std::vector<Edge> accepted;
  for (auto [u, v] : candidates) {
    if (degree[u] < d && degree[v] < d) {
      accepted.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
  }
  return Graph(n, accepted);
}

Graph random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw InputError("random_tree: n must be >= 1");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) {
    edges.push_back(make_edge(order[i], order[rng.below(i)]));
  }
  return Graph(n, edges);
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph cycle_graph(int n) {
  if (n < 3) throw InputError("cycle_graph: n must be >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back(make_edge(i, (i + 1) % n));
  return Graph(n, edges);
}

Graph hypercube_graph(int dim) {
  if (dim < 0 || dim > 16) throw InputError("hypercube_graph: dim out of range");
  const int n = 1 << dim;
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < dim; ++b) {
      int u = v ^ (1 << b);
      if (v < u) edges.emplace_back(v, u);
    }
  }
  return Graph(n, edges);
}

namespace {

struct IsoSearch {
  const Graph& a;
  const Graph& b;
  std::vector<int> map_ab;
  std::vector<bool> used_b;
  std::vector<Vertex> order;  // vertices of a in assignment order

  bool extend(std::size_t depth) {
    if (depth == order.size()) return true;
    Vertex va = order[depth];
    for (Vertex vb = 0; vb < b.n(); ++vb) {
      if (used_b[vb] || a.degree(va) != b.degree(vb)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        Vertex pa = order[k];
        ok = a.has_edge(va, pa) == b.has_edge(vb, map_ab[pa]);
      }
      if (!ok) continue;
      map_ab[va] = vb;
      used_b[vb] = true;
      if (extend(depth + 1)) return true;
      used_b[vb] = false;
    }
    map_ab[va] = -1;
    return false;
  }
};

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> da, db;
  for (Vertex v = 0; v < a.n(); ++v) da.push_back(a.degree(v));
  for (Vertex v = 0; v < b.n(); ++v) db.push_back(b.degree(v));
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;

  // BFS order keeps already-mapped neighbours close, which prunes early.
  IsoSearch s{a, b, std::vector<int>(a.n(), -1), std::vector<bool>(b.n(), false), {}};
  std::vector<bool> seen(a.n(), false);
  for (Vertex root = 0; root < a.n(); ++root) {
    if (seen[root]) continue;
    std::vector<Vertex> queue{root};
    seen[root] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      s.order.push_back(queue[h]);
      for (Vertex w : a.neighbors(queue[h])) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
  }
  return s.extend(0);
}

std::string to_string(const Graph& g) {
  std::ostringstream out;
  out << "Graph(n=" << g.n() << ", edges=[";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    if (i) out << ",";
    out << "(" << g.edges()[i].first << "," << g.edges()[i].second << ")";
  }
  out << "])";
  return out.str();
}

}  // namespace mrf
