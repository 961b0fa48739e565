#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrf/estimator.hpp"
#include "mrf/graph.hpp"

namespace mrf {

struct ReconConfig {
  int d = 1;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> kappa;  // correlation threshold; decay algorithm only
  double c1 = 1.0;
  int jobs = 1;
  /// Largest correlation neighbourhood the decay algorithm will search.
  int decay_cap = 24;

  double gamma() const { return epsilon * delta * delta / 9.0; }
  /// Throws InputError unless d >= 0, epsilon > 0, delta > 0 (and kappa > 0 if set).
  void validate() const;
};

enum class Algorithm { ctp, general, decay };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);

struct VertexOutcome {
  std::vector<Vertex> neighborhood;
  long long candidates_tested = 0;
  bool failed = false;     // no candidate accepted (ctp)
  bool ambiguous = false;  // several largest candidates passed (general/decay)
  std::vector<std::vector<Vertex>> alternatives;  // other largest passing sets when ambiguous
};

struct ReconResult {
  Algorithm algorithm = Algorithm::ctp;
  ReconConfig config;
  Graph graph;
  std::vector<VertexOutcome> per_vertex;
  bool symmetrized = true;
  /// (u, v) with u in N(v) but v not in N(u).
  std::vector<Edge> inconsistencies;
  std::vector<std::string> warnings;

  /// False when a vertex failed, a search was ambiguous, or the directed
  /// neighbourhoods disagree.
  bool success() const;
};

/// Smallest U (size, then lexicographic) such that every gated conditional
/// gap for every w outside U + {v} is below epsilon/2.
VertexOutcome neighborhood_ctp(const Estimator& est, Vertex v, const ReconConfig& cfg);
ReconResult reconstruct_ctp(const Estimator& est, const ReconConfig& cfg);

/// min over (W, u_i) of the max gated gap when u_i is perturbed. W ranges over
/// subsets of `pool` minus U with |W| <= d; pool defaults to V - {v}.
/// Returns +infinity for empty U and 0 when nothing passes the mass gate.
double score_f(const Estimator& est, Vertex v, std::span<const Vertex> U, const ReconConfig& cfg,
               const std::vector<Vertex>* pool = nullptr);

/// Largest U with finite score above epsilon/2; empty when none.
VertexOutcome neighborhood_general(const Estimator& est, Vertex v, const ReconConfig& cfg,
                                   const std::vector<Vertex>* pool = nullptr);
ReconResult reconstruct_general(const Estimator& est, const ReconConfig& cfg);

/// All pairwise correlation distances; entry [u][v], zero diagonal.
std::vector<std::vector<double>> correlation_matrix(const Estimator& est, int jobs = 1);

/// {u : corr(u, v) > kappa / 2} from a correlation matrix.
std::vector<Vertex> correlation_neighborhood(const std::vector<std::vector<double>>& corr, Vertex v,
                                             double kappa);

/// neighborhood_general restricted to candidates and W inside each vertex's
/// correlation neighbourhood. Throws CapExceeded when a neighbourhood is
/// larger than cfg.decay_cap.
ReconResult reconstruct_decay(const Estimator& est, const ReconConfig& cfg);

ReconResult reconstruct(const Estimator& est, Algorithm algo, const ReconConfig& cfg);

/// Largest statistic the algorithm must keep at or below epsilon/2 to return
/// `truth` from this source: for ctp the gated gaps given N(v) + {w}, for the
/// general and decay algorithms the scores of wrong sets at least as large as
/// N(v). Zero up to round-off when the source is Markov on `truth`; positive
/// under observation noise.
double markov_leakage(const Estimator& est, const Graph& truth, Algorithm algo, const ReconConfig& cfg);

/// Union of directed claims; fills graph and inconsistencies.
void symmetrize(ReconResult& result, int n);

nlohmann::json config_to_json(const ReconConfig& cfg);
nlohmann::json result_to_json(const ReconResult& result);
/// Two-column "u,v" edge list with header.
std::string edges_to_csv(const Graph& g);

/// Edge precision and recall of `estimate` against `truth` (1 when the
/// relevant edge set is empty).
struct EdgeScore {
  double precision = 1.0;
  double recall = 1.0;
};
EdgeScore score_edges(const Graph& truth, const Graph& estimate);

}  // namespace mrf
