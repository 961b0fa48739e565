#pragma once

// Small models shared by the test binaries.

#include <cstdint>
#include <vector>

#include "mrf/graph.hpp"
#include "mrf/model.hpp"
#include "mrf/random.hpp"

namespace testmodels {

using namespace mrf;

inline Model two_node(double beta) {
  const Coupling c[] = {{0, 1, beta}};
  return new_ising(2, c);
}

inline Model chain(double beta) {
  const Coupling c[] = {{0, 1, beta}, {1, 2, beta}};
  return new_ising(3, c);
}

/// Weight e^lambda on even-parity configurations of three spins.
inline Model parity_triangle(double lambda) {
  Potential p{{0, 1, 2}, std::vector<double>(8)};
  for (int x = 0; x < 8; ++x) p.table[x] = __builtin_popcount(x) % 2 == 0 ? lambda : 0.0;
  return Model::from_potentials(3, 2, {p});
}

inline Model independent(int n) { return new_ising(n, std::span<const Coupling>{}); }

/// Random potentials on a random bounded graph, alphabet A.
inline Model random_potts(int n, int d, int A, std::uint64_t seed) {
  Graph g = random_bounded_graph(n, d, seed);
  Rng rng(seed ^ 0x55);
  std::vector<Potential> pots;
  for (auto [u, v] : g.edges()) {
    Potential p{{u, v}, std::vector<double>(A * A)};
    for (double& x : p.table) x = rng.uniform(-1.0, 1.0);
    pots.push_back(p);
  }
  for (Vertex v = 0; v < n; ++v) {
    Potential p{{v}, std::vector<double>(A)};
    for (double& x : p.table) x = rng.uniform(-0.5, 0.5);
    pots.push_back(p);
  }
  return Model::from_potentials(n, A, pots);
}

}  // namespace testmodels
