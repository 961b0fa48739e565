#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mrf/graph.hpp"

namespace mrf {

using Symbol = int;
using Assignment = std::vector<Symbol>;

/// Ising spin for alphabet symbol x: 0 -> +1, 1 -> -1.
constexpr int spin(Symbol x) { return x == 0 ? 1 : -1; }

/// Mixed-radix index of `values` with the first entry most significant.
std::size_t mixed_radix_index(std::span<const Symbol> values, int alphabet);
/// Inverse of mixed_radix_index for a fixed length.
Assignment mixed_radix_digits(std::size_t index, int length, int alphabet);

/// Clique potential. table[mixed_radix_index(x_clique)] = Psi(x_clique);
/// -infinity encodes a forbidden configuration.
struct Potential {
  std::vector<Vertex> clique;
  std::vector<double> table;

  double operator()(std::span<const Symbol> values, int alphabet) const {
    return table[mixed_radix_index(values, alphabet)];
  }
};

/// Gibbs distribution P(x) proportional to exp(sum_a Psi_a(x_a)).
class Model {
 public:
  Model() = default;
  /// Stores the pieces as given; call validate() to check invariants.
  Model(Graph graph, int alphabet, std::vector<Potential> potentials);

  /// Graph is the union of the potential cliques. Throws InputError on
  /// out-of-range vertices or malformed tables.
  static Model from_potentials(int n, int alphabet, std::vector<Potential> potentials);

  int n() const { return graph_.n(); }
  int alphabet() const { return alphabet_; }
  const Graph& graph() const { return graph_; }
  const std::vector<Potential>& potentials() const { return potentials_; }

  /// Unnormalized log-weight of a full configuration.
  double log_weight(std::span<const Symbol> state) const;

 private:
  Graph graph_;
  int alphabet_ = 2;
  std::vector<Potential> potentials_;
};

struct Coupling {
  Vertex u;
  Vertex v;
  double beta;
};

/// Ising model without external field: one 2-clique potential
/// beta * s(x_u) * s(x_v) per coupling. Throws InputError on duplicate or
/// out-of-range pairs.
Model new_ising(int n, std::span<const Coupling> couplings);

/// Ising model with the same coupling on every edge of `g`.
Model ising_on_graph(const Graph& g, double beta);

/// Ising model on `g` with |beta| drawn uniformly from [beta_min, beta_max];
/// the sign is negative with probability `negative_fraction`.
Model random_ising(const Graph& g, double beta_min, double beta_max,
                   std::uint64_t seed, double negative_fraction = 0.0);

/// Invariant violations as human-readable strings; empty iff the model is valid.
std::vector<std::string> validate(const Model& model);

/// Non-fatal remarks, currently the presence of hard (-inf) constraints, for
/// which the reconstruction guarantees need not hold.
std::vector<std::string> model_warnings(const Model& model);

}  // namespace mrf
