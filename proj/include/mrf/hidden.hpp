#pragma once

#include <vector>

#include <json.hpp>

#include "mrf/graph.hpp"
#include "mrf/reconstruct.hpp"

namespace mrf {

/// Maximal cliques (Bron-Kerbosch with pivoting), each sorted, listed in
/// lexicographic order.
std::vector<std::vector<Vertex>> maximal_cliques(const Graph& g);

struct HiddenRecovery {
  Graph graph;  // observed vertices keep their labels; new vertices follow
  std::vector<std::vector<Vertex>> cliques;  // clique contracted into vertex n + i
};

/// Explains every triangle of `gstar` by a hidden vertex. Finds vertex-disjoint
/// cliques (sizes 3..dprime) whose internal edges, once removed, leave a
/// triangle-free graph, such that each clique member ends with degree in
/// [3, dprime] after the hidden vertex is attached. Each clique is replaced by
/// a fresh vertex adjacent to its members. Throws HiddenRecoveryError when no
/// such family exists or when several do. Requires dprime >= 3.
HiddenRecovery recover_hidden(const Graph& gstar, int dprime);

struct HiddenReconstruction {
  ReconResult observed;  // general algorithm with d = 2 dprime
  HiddenRecovery recovered;
};

/// Reconstruction on observed vertices followed by hidden-vertex recovery.
/// `cfg.d` is ignored and replaced by 2 * dprime.
HiddenReconstruction reconstruct_with_hidden(const Estimator& est, int dprime, ReconConfig cfg);

nlohmann::json hidden_to_json(const HiddenReconstruction& h);

}  // namespace mrf
