#include "mrf/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mrf/errors.hpp"
#include "mrf/random.hpp"

namespace mrf {

std::size_t mixed_radix_index(std::span<const Symbol> values, int alphabet) {
  std::size_t index = 0;
  for (Symbol x : values) index = index * alphabet + static_cast<std::size_t>(x);
  return index;
}

Assignment mixed_radix_digits(std::size_t index, int length, int alphabet) {
  Assignment digits(length);
  for (int i = length - 1; i >= 0; --i) {
    digits[i] = static_cast<Symbol>(index % alphabet);
    index /= alphabet;
  }
  return digits;
}

Model::Model(Graph graph, int alphabet, std::vector<Potential> potentials)
    : graph_(std::move(graph)), alphabet_(alphabet), potentials_(std::move(potentials)) {}

Model Model::from_potentials(int n, int alphabet, std::vector<Potential> potentials) {
  if (n < 0) throw InputError("model: negative vertex count");
  if (alphabet < 2) throw InputError("model: alphabet must be >= 2");
  std::set<Edge> edges;
  for (const auto& p : potentials) {
    if (p.clique.empty()) throw InputError("model: empty potential clique");
    std::size_t expected = 1;
    for (Vertex v : p.clique) {
      if (v < 0 || v >= n) throw InputError("model: clique vertex " + std::to_string(v) + " out of range");
      expected *= static_cast<std::size_t>(alphabet);
    }
    if (p.table.size() != expected) {
      throw InputError("model: potential table has " + std::to_string(p.table.size()) +
                       " entries, expected " + std::to_string(expected));
    }
    for (std::size_t i = 0; i < p.clique.size(); ++i) {
      for (std::size_t j = i + 1; j < p.clique.size(); ++j) {
        if (p.clique[i] == p.clique[j]) throw InputError("model: repeated vertex in clique");
        edges.insert(make_edge(p.clique[i], p.clique[j]));
      }
    }
  }
  std::vector<Edge> edge_list(edges.begin(), edges.end());
  return Model(Graph(n, edge_list), alphabet, std::move(potentials));
}

double Model::log_weight(std::span<const Symbol> state) const {
  double total = 0.0;
  for (const auto& p : potentials_) {
    std::size_t index = 0;
    for (Vertex v : p.clique) index = index * alphabet_ + static_cast<std::size_t>(state[v]);
    total += p.table[index];
  }
  return total;
}

Model new_ising(int n, std::span<const Coupling> couplings) {
  if (n < 0) throw InputError("new_ising: negative vertex count");
  std::vector<Edge> edges;
  std::vector<Potential> potentials;
  for (const auto& c : couplings) {
    if (c.u < 0 || c.v < 0 || c.u >= n || c.v >= n) {
      throw InputError("new_ising: coupling (" + std::to_string(c.u) + "," + std::to_string(c.v) +
                       ") out of range");
    }
    if (c.u == c.v) throw InputError("new_ising: self-coupling at " + std::to_string(c.u));
    edges.push_back(make_edge(c.u, c.v));
    Potential p{{c.u, c.v}, {}};
    for (Symbol xu = 0; xu < 2; ++xu) {
      for (Symbol xv = 0; xv < 2; ++xv) p.table.push_back(c.beta * spin(xu) * spin(xv));
    }
    potentials.push_back(std::move(p));
  }
  // Graph rejects duplicate pairs.
  return Model(Graph(n, edges), 2, std::move(potentials));
}

Model ising_on_graph(const Graph& g, double beta) {
  std::vector<Coupling> couplings;
  for (auto [u, v] : g.edges()) couplings.push_back({u, v, beta});
  return new_ising(g.n(), couplings);
}

Model random_ising(const Graph& g, double beta_min, double beta_max, std::uint64_t seed,
                   double negative_fraction) {
  Rng rng(seed);
  std::vector<Coupling> couplings;
  for (auto [u, v] : g.edges()) {
    double beta = rng.uniform(beta_min, beta_max);
    if (rng.uniform() < negative_fraction) beta = -beta;
    couplings.push_back({u, v, beta});
  }
  return new_ising(g.n(), couplings);
}

namespace {

std::string pair_text(Vertex a, Vertex b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

std::vector<std::string> validate(const Model& model) {
  std::vector<std::string> out;
  const Graph& g = model.graph();
  const int n = g.n();
  const int A = model.alphabet();
  if (A < 2) out.push_back("alphabet size below 2: " + std::to_string(A));

  std::set<Edge> covered;
  for (std::size_t k = 0; k < model.potentials().size(); ++k) {
    const auto& p = model.potentials()[k];
    const std::string tag = "potential " + std::to_string(k);
    if (p.clique.empty()) {
      out.push_back(tag + ": empty clique");
      continue;
    }
    bool in_range = true;
    for (Vertex v : p.clique) {
      if (v < 0 || v >= n) {
        out.push_back(tag + ": clique vertex out of range: " + std::to_string(v));
        in_range = false;
      }
    }
    std::vector<Vertex> sorted = p.clique;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      out.push_back(tag + ": repeated clique vertex");
    }
    double expected = std::pow(static_cast<double>(std::max(A, 1)), static_cast<double>(p.clique.size()));
    if (static_cast<double>(p.table.size()) != expected) {
      out.push_back(tag + ": table length " + std::to_string(p.table.size()) + " != A^|clique|");
    }
    if (!in_range) continue;
    for (std::size_t i = 0; i < p.clique.size(); ++i) {
      for (std::size_t j = i + 1; j < p.clique.size(); ++j) {
        Vertex a = p.clique[i], b = p.clique[j];
        if (a == b) continue;
        if (!g.has_edge(a, b)) {
          out.push_back("potential clique not in graph: " + pair_text(std::min(a, b), std::max(a, b)));
        } else {
          covered.insert(make_edge(a, b));
        }
      }
    }
  }
  for (auto [u, v] : g.edges()) {
    if (!covered.count({u, v})) out.push_back("uncovered edge: " + pair_text(u, v));
  }
  return out;
}

std::vector<std::string> model_warnings(const Model& model) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < model.potentials().size(); ++k) {
    const auto& t = model.potentials()[k].table;
    if (std::any_of(t.begin(), t.end(), [](double x) { return std::isinf(x) && x < 0; })) {
      out.push_back("potential " + std::to_string(k) +
                    " has hard (-inf) constraints; reconstruction guarantees may not apply");
    }
  }
  return out;
}

}  // namespace mrf
