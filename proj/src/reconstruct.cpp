#include "mrf/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mrf/errors.hpp"
#include "mrf/parallel.hpp"
#include "mrf/subsets.hpp"

namespace mrf {

using nlohmann::json;

void ReconConfig::validate() const {
  if (d < 0) throw InputError("config: d must be >= 0");
  if (!(epsilon > 0.0)) throw InputError("config: epsilon must be > 0");
  if (!(delta > 0.0)) throw InputError("config: delta must be > 0");
  if (kappa && !(*kappa > 0.0)) throw InputError("config: kappa must be > 0");
  if (jobs < 1) throw InputError("config: jobs must be >= 1");
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::ctp: return "ctp";
    case Algorithm::general: return "general";
    case Algorithm::decay: return "decay";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ctp") return Algorithm::ctp;
  if (name == "general") return Algorithm::general;
  if (name == "decay") return Algorithm::decay;
  throw InputError("unknown algorithm '" + name + "' (expected ctp, general or decay)");
}

bool ReconResult::success() const {
  // Correct neighbourhoods are mutually consistent, so a one-sided claim
  // already shows an estimation failure.
  if (!inconsistencies.empty()) return false;
  for (const auto& o : per_vertex) {
    if (o.failed || o.ambiguous) return false;
  }
  return true;
}

namespace {

void check_estimator(const Estimator& est, const ReconConfig& cfg, Vertex v = 0) {
  cfg.validate();
  if (v < 0 || v >= est.n()) throw InputError("reconstruct: vertex " + std::to_string(v) + " out of range");
}

std::vector<Vertex> without(std::span<const Vertex> pool, std::span<const Vertex> drop) {
  std::vector<Vertex> out;
  for (Vertex u : pool) {
    if (std::find(drop.begin(), drop.end(), u) == drop.end()) out.push_back(u);
  }
  return out;
}

double gated_gap(const Estimator& est, Vertex target, Vertex pert, std::span<const Vertex> cond,
                 double gate) {
  std::vector<Vertex> vars(cond.begin(), cond.end());
  vars.push_back(target);
  auto t = est.table(vars);
  return max_gated_gap(*t, t->position(target), t->position(pert), gate);
}

template <class Search>
ReconResult per_vertex_run(const Estimator& est, Algorithm algo, const ReconConfig& cfg,
                           Search&& search) {
  cfg.validate();
  ReconResult result;
  result.algorithm = algo;
  result.config = cfg;
  result.per_vertex.resize(est.n());
  parallel_for(static_cast<std::size_t>(est.n()), cfg.jobs,
               [&](std::size_t v) { result.per_vertex[v] = search(static_cast<Vertex>(v)); });
  symmetrize(result, est.n());
  return result;
}

}  // namespace

VertexOutcome neighborhood_ctp(const Estimator& est, Vertex v, const ReconConfig& cfg) {
  check_estimator(est, cfg, v);
  const double gate = cfg.delta / 2.0;
  const double limit = cfg.epsilon / 2.0;
  const Vertex self[] = {v};
  const std::vector<Vertex> pool = vertices_except(est.n(), self);
  VertexOutcome out;
  out.failed = true;
  for_each_subset_up_to(pool, cfg.d, [&](const std::vector<Vertex>& U) {
    ++out.candidates_tested;
    for (Vertex w : pool) {
      if (std::binary_search(U.begin(), U.end(), w)) continue;
      const Vertex single[] = {w};
      if (!(gated_gap(est, v, w, set_union(U, single), gate) < limit)) return true;
    }
    out.neighborhood = U;
    out.failed = false;
    return false;
  });
  return out;
}

ReconResult reconstruct_ctp(const Estimator& est, const ReconConfig& cfg) {
  return per_vertex_run(est, Algorithm::ctp, cfg,
                        [&](Vertex v) { return neighborhood_ctp(est, v, cfg); });
}

double score_f(const Estimator& est, Vertex v, std::span<const Vertex> U, const ReconConfig& cfg,
               const std::vector<Vertex>* pool) {
  check_estimator(est, cfg, v);
  if (U.empty()) return std::numeric_limits<double>::infinity();
  std::vector<Vertex> sorted_U = sorted_vertex_set(U);
  if (std::binary_search(sorted_U.begin(), sorted_U.end(), v)) {
    throw InputError("score_f: U contains v");
  }
  const Vertex self[] = {v};
  const std::vector<Vertex> base = pool ? without(*pool, self) : vertices_except(est.n(), self);
  const std::vector<Vertex> w_pool = without(base, sorted_U);
  const double gate = cfg.delta / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for_each_subset_up_to(w_pool, cfg.d, [&](const std::vector<Vertex>& W) {
    const std::vector<Vertex> cond = set_union(sorted_U, W);
    for (Vertex ui : sorted_U) {
      best = std::min(best, gated_gap(est, v, ui, cond, gate));
      if (best == 0.0) return false;
    }
    return true;
  });
  return best;
}

VertexOutcome neighborhood_general(const Estimator& est, Vertex v, const ReconConfig& cfg,
                                   const std::vector<Vertex>* pool) {
  check_estimator(est, cfg, v);
  const Vertex self[] = {v};
  const std::vector<Vertex> candidates = pool ? without(*pool, self) : vertices_except(est.n(), self);
  const double limit = cfg.epsilon / 2.0;
  VertexOutcome out;
  for (int size = std::min<int>(cfg.d, static_cast<int>(candidates.size())); size >= 1; --size) {
    std::vector<std::vector<Vertex>> passing;
    for_each_combination(candidates, size, [&](const std::vector<Vertex>& U) {
      ++out.candidates_tested;
      const double f = score_f(est, v, U, cfg, &candidates);
      if (std::isfinite(f) && f > limit) passing.push_back(U);
      return true;
    });
    if (!passing.empty()) {
      out.neighborhood = passing.front();
      if (passing.size() > 1) {
        out.ambiguous = true;
        out.alternatives.assign(passing.begin() + 1, passing.end());
      }
      return out;
    }
  }
  return out;
}

ReconResult reconstruct_general(const Estimator& est, const ReconConfig& cfg) {
  return per_vertex_run(est, Algorithm::general, cfg,
                        [&](Vertex v) { return neighborhood_general(est, v, cfg); });
}

std::vector<std::vector<double>> correlation_matrix(const Estimator& est, int jobs) {
  const int n = est.n();
  std::vector<std::vector<double>> corr(n, std::vector<double>(n, 0.0));
  parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t u) {
    for (int v = static_cast<int>(u) + 1; v < n; ++v) corr[u][v] = est.corr(static_cast<Vertex>(u), v);
  });
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) corr[v][u] = corr[u][v];
  }
  return corr;
}

std::vector<Vertex> correlation_neighborhood(const std::vector<std::vector<double>>& corr, Vertex v,
                                             double kappa) {
  std::vector<Vertex> out;
  for (Vertex u = 0; u < static_cast<Vertex>(corr.size()); ++u) {
    if (u != v && corr[v][u] > kappa / 2.0) out.push_back(u);
  }
  return out;
}

ReconResult reconstruct_decay(const Estimator& est, const ReconConfig& cfg) {
  if (!cfg.kappa) throw InputError("decay: kappa is required");
  cfg.validate();
  const auto corr = correlation_matrix(est, cfg.jobs);
  std::vector<std::vector<Vertex>> hoods(est.n());
  bool all_empty = true;
  for (Vertex v = 0; v < est.n(); ++v) {
    hoods[v] = correlation_neighborhood(corr, v, *cfg.kappa);
    if (static_cast<int>(hoods[v].size()) > cfg.decay_cap) {
      throw CapExceeded("decay: correlation neighbourhood of vertex " + std::to_string(v) + " has " +
                        std::to_string(hoods[v].size()) + " vertices, above the cap of " +
                        std::to_string(cfg.decay_cap) + " (kappa too small?)");
    }
    if (!hoods[v].empty()) all_empty = false;
  }
  ReconResult result = per_vertex_run(est, Algorithm::decay, cfg, [&](Vertex v) {
    return neighborhood_general(est, v, cfg, &hoods[v]);
  });
  if (all_empty && est.n() > 1) {
    result.warnings.push_back("every correlation neighbourhood is empty; kappa exceeds all correlations");
  }
  return result;
}

ReconResult reconstruct(const Estimator& est, Algorithm algo, const ReconConfig& cfg) {
  switch (algo) {
    case Algorithm::ctp: return reconstruct_ctp(est, cfg);
    case Algorithm::general: return reconstruct_general(est, cfg);
    case Algorithm::decay: return reconstruct_decay(est, cfg);
  }
  throw InputError("unknown algorithm");
}

double markov_leakage(const Estimator& est, const Graph& truth, Algorithm algo, const ReconConfig& cfg) {
  cfg.validate();
  if (truth.n() != est.n()) throw InputError("markov_leakage: graph and source sizes differ");
  const double gate = cfg.delta / 2.0;
  double leak = 0.0;
  for (Vertex v = 0; v < est.n(); ++v) {
    const std::vector<Vertex>& nb = truth.neighbors(v);
    if (static_cast<int>(nb.size()) > cfg.d) continue;
    const Vertex self[] = {v};
    const std::vector<Vertex> pool = vertices_except(est.n(), self);
    if (algo == Algorithm::ctp) {
      for (Vertex w : without(pool, nb)) {
        const Vertex single[] = {w};
        leak = std::max(leak, gated_gap(est, v, w, set_union(nb, single), gate));
      }
      continue;
    }
    for (int size = std::max<int>(1, static_cast<int>(nb.size())); size <= cfg.d; ++size) {
      for_each_combination(pool, size, [&](const std::vector<Vertex>& U) {
        if (U == nb) return true;
        const double f = score_f(est, v, U, cfg, &pool);
        if (std::isfinite(f)) leak = std::max(leak, f);
        return true;
      });
    }
  }
  return leak;
}

void symmetrize(ReconResult& result, int n) {
  std::set<Edge> edges;
  result.inconsistencies.clear();
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : result.per_vertex[v].neighborhood) {
      edges.insert(make_edge(u, v));
      const auto& back = result.per_vertex[u].neighborhood;
      if (!std::binary_search(back.begin(), back.end(), v)) result.inconsistencies.push_back({u, v});
    }
  }
  std::sort(result.inconsistencies.begin(), result.inconsistencies.end());
  std::vector<Edge> list(edges.begin(), edges.end());
  result.graph = Graph(n, list);
  result.symmetrized = true;
}

json config_to_json(const ReconConfig& cfg) {
  json j = {{"d", cfg.d},
            {"epsilon", cfg.epsilon},
            {"delta", cfg.delta},
            {"gamma", cfg.gamma()},
            {"c1", cfg.c1}};
  j["kappa"] = cfg.kappa ? json(*cfg.kappa) : json(nullptr);
  return j;
}

json result_to_json(const ReconResult& result) {
  json edges = json::array();
  for (const auto& [u, v] : result.graph.edges()) edges.push_back({u, v});
  json per_vertex = json::object();
  for (std::size_t v = 0; v < result.per_vertex.size(); ++v) {
    const auto& o = result.per_vertex[v];
    json entry = {{"neighborhood", o.neighborhood},
                  {"candidates_tested", o.candidates_tested},
                  {"failed", o.failed},
                  {"ambiguous", o.ambiguous}};
    if (o.ambiguous) entry["alternatives"] = o.alternatives;
    per_vertex[std::to_string(v)] = std::move(entry);
  }
  json inconsistencies = json::array();
  for (const auto& [u, v] : result.inconsistencies) inconsistencies.push_back({u, v});
  return {{"algorithm", to_string(result.algorithm)},
          {"n", result.graph.n()},
          {"edges", std::move(edges)},
          {"per_vertex", std::move(per_vertex)},
          {"symmetrized", result.symmetrized},
          {"inconsistencies", std::move(inconsistencies)},
          {"warnings", result.warnings},
          {"success", result.success()},
          {"config", config_to_json(result.config)}};
}

std::string edges_to_csv(const Graph& g) {
  std::string out = "u,v\n";
  for (const auto& [u, v] : g.edges()) out += std::to_string(u) + "," + std::to_string(v) + "\n";
  return out;
}

EdgeScore score_edges(const Graph& truth, const Graph& estimate) {
  std::size_t hit = 0;
  for (const auto& [u, v] : estimate.edges()) {
    if (u < truth.n() && v < truth.n() && truth.has_edge(u, v)) ++hit;
  }
  EdgeScore s;
  if (estimate.edge_count() > 0) s.precision = static_cast<double>(hit) / estimate.edge_count();
  if (truth.edge_count() > 0) s.recall = static_cast<double>(hit) / truth.edge_count();
  return s;
}

}  // namespace mrf
