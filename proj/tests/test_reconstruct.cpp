#include <doctest.h>

#include <cmath>
#include <limits>

#include "mrf/bounds.hpp"
#include "mrf/conditions.hpp"
#include "mrf/errors.hpp"
#include "mrf/hidden.hpp"
#include "mrf/oracle.hpp"
#include "mrf/reconstruct.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace mrf;
using namespace testmodels;

namespace {

ReconConfig config_from(const ConditionReport& r, int d) {
  ReconConfig cfg;
  cfg.d = d;
  cfg.epsilon = r.epsilon_star;
  cfg.delta = r.delta_star;
  return cfg;
}

ReconConfig loose(int d) {
  ReconConfig cfg;
  cfg.d = d;
  cfg.epsilon = 0.1;
  cfg.delta = 0.01;
  return cfg;
}

/// Hypercube with vertex `hidden` removed and its neighbourhood made a clique.
Graph hidden_view(const Graph& g, Vertex hidden) {
  std::vector<Vertex> keep;
  std::vector<int> label(g.n(), -1);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (v == hidden) continue;
    label[v] = static_cast<int>(keep.size());
    keep.push_back(v);
  }
  std::vector<Edge> edges = g.induced(keep).edges();
  const auto& nb = g.neighbors(hidden);
  for (std::size_t a = 0; a < nb.size(); ++a) {
    for (std::size_t b = a + 1; b < nb.size(); ++b) edges.push_back(make_edge(label[nb[a]], label[nb[b]]));
  }
  return Graph(static_cast<int>(keep.size()), edges);
}

Graph k33() {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < 3; ++a) {
    for (Vertex b = 3; b < 6; ++b) edges.push_back({a, b});
  }
  return Graph(6, edges);
}

/// Disjoint union of two graphs, second relabelled after the first.
Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (auto [u, v] : b.edges()) edges.push_back({u + a.n(), v + a.n()});
  return Graph(a.n() + b.n(), edges);
}

}  // namespace

TEST_CASE("config validation and algorithm names") {
  ReconConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = loose(2);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.gamma() == doctest::Approx(0.1 * 0.0001 / 9));
  cfg.kappa = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK(algorithm_from_string("decay") == Algorithm::decay);
  CHECK(to_string(Algorithm::general) == "general");
  CHECK_THROWS_AS(algorithm_from_string("map"), InputError);
}

TEST_CASE("ctp accepts the empty set on an independent model") {
  Estimator e = Estimator::exact(joint_distribution(independent(3)));
  for (Vertex v = 0; v < 3; ++v) {
    VertexOutcome o = neighborhood_ctp(e, v, loose(1));
    CHECK(o.neighborhood.empty());
    CHECK(o.candidates_tested == 1);
  }
  ReconResult r = reconstruct_ctp(e, loose(1));
  CHECK(r.graph.edge_count() == 0);
  CHECK(r.success());
}

TEST_CASE("ctp on the two-node model") {
  Model m = two_node(1.0);
  Estimator e = Estimator::exact(joint_distribution(m));
  ReconConfig cfg = config_from(verify_thm2_conditions(m, 1), 1);
  VertexOutcome o = neighborhood_ctp(e, 0, cfg);
  CHECK(o.neighborhood == std::vector<Vertex>{1});
  CHECK(o.candidates_tested == 2);
  CHECK_FALSE(o.failed);
}

TEST_CASE("ctp recovers small graphs from exact marginals") {
  SUBCASE("C4") {
    Model m = ising_on_graph(cycle_graph(4), 1.0);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconResult r = reconstruct_ctp(e, config_from(verify_thm2_conditions(m, 2), 2));
    CHECK(r.graph == m.graph());
    CHECK(r.inconsistencies.empty());
    for (Vertex v = 0; v < 4; ++v) CHECK(r.per_vertex[v].neighborhood.size() == 2);
  }
  SUBCASE("cube") {
    Model m = ising_on_graph(hypercube_graph(3), 0.9);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconResult r = reconstruct_ctp(e, config_from(verify_thm2_conditions(m, 3), 3));
    CHECK(r.graph == m.graph());
  }
  SUBCASE("jobs do not change the answer") {
    Model m = random_ising(random_bounded_graph(7, 3, 5), 0.4, 1.0, 5, 0.3);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconConfig cfg = config_from(verify_thm2_conditions(m, 3), 3);
    ReconResult serial = reconstruct_ctp(e, cfg);
    cfg.jobs = 3;
    ReconResult threaded = reconstruct_ctp(e, cfg);
    CHECK(serial.graph == m.graph());
    CHECK(threaded.graph == serial.graph);
    CHECK(result_to_json(threaded)["per_vertex"] == result_to_json(serial)["per_vertex"]);
  }
}

TEST_CASE("ctp reports failure when no candidate passes") {
  // An empirical source with two rows leaves large spurious gaps.
  SampleMatrix s(2, 3, 2, {0, 0, 1, 1, 1, 0}, 1, "test");
  ReconConfig cfg = loose(0);
  VertexOutcome o = neighborhood_ctp(Estimator::empirical(s), 0, cfg);
  CHECK(o.failed);
  CHECK_FALSE(reconstruct_ctp(Estimator::empirical(s), cfg).success());
}

TEST_CASE("score_f conventions and the two-node value") {
  Estimator e = Estimator::exact(joint_distribution(two_node(1.0)));
  ReconConfig cfg = loose(1);
  CHECK(std::isinf(score_f(e, 0, {}, cfg)));
  const Vertex U[] = {1};
  CHECK(score_f(e, 0, U, cfg) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));

  Estimator indep = Estimator::exact(joint_distribution(independent(3)));
  CHECK(score_f(indep, 0, U, cfg) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("score_f matches a brute-force evaluation") {
  Model m = random_ising(random_bounded_graph(5, 2, 9), 0.3, 1.0, 9, 0.5);
  DistTable dist = joint_distribution(m);
  Estimator e = Estimator::exact(dist);
  const auto oe = oracle::enumerate(m);
  ReconConfig cfg = loose(2);
  const Vertex v = 0;
  const std::vector<Vertex> U = {1, 3};
  std::vector<Vertex> pool = {2, 4};
  double expected = std::numeric_limits<double>::infinity();
  oracle::for_each_subset(pool, 2, [&](const std::vector<Vertex>& W) {
    for (std::size_t i = 0; i < U.size(); ++i) {
      std::vector<Vertex> cond = U;
      cond.insert(cond.end(), W.begin(), W.end());
      double best = 0.0;
      oracle::for_each_assignment(static_cast<int>(cond.size()), 2, [&](const std::vector<int>& x) {
        std::vector<int> y = x;
        y[i] = 1 - x[i];
        if (oracle::prob(oe, cond, x) <= cfg.delta / 2 || oracle::prob(oe, cond, y) <= cfg.delta / 2) return;
        for (int xv = 0; xv < 2; ++xv) {
          best = std::max(best, std::abs(oracle::conditional(oe, v, xv, cond, x) - oracle::conditional(oe, v, xv, cond, y)));
        }
      });
      expected = std::min(expected, best);
    }
  });
  CHECK(score_f(e, v, U, cfg) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("general algorithm") {
  SUBCASE("independent model") {
    Estimator e = Estimator::exact(joint_distribution(independent(3)));
    for (Vertex v = 0; v < 3; ++v) CHECK(neighborhood_general(e, v, loose(1)).neighborhood.empty());
    CHECK(reconstruct_general(e, loose(1)).graph.edge_count() == 0);
  }
  SUBCASE("two-node model") {
    Estimator e = Estimator::exact(joint_distribution(two_node(1.0)));
    ReconConfig cfg = loose(1);
    cfg.epsilon = 1.5;
    CHECK(neighborhood_general(e, 0, cfg).neighborhood == std::vector<Vertex>{1});
  }
  SUBCASE("C4 with measured parameters") {
    Model m = ising_on_graph(cycle_graph(4), 1.0);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconResult r = reconstruct_general(e, config_from(verify_thm3_conditions(m, 2), 2));
    CHECK(r.graph == m.graph());
    CHECK(r.success());
  }
  SUBCASE("path") {
    Model m = ising_on_graph(path_graph(3), 0.8);
    Estimator e = Estimator::exact(joint_distribution(m));
    CHECK(reconstruct_general(e, config_from(verify_thm3_conditions(m, 2), 2)).graph == m.graph());
  }
  SUBCASE("parity triangle defeats the pairwise test only") {
    Model m = parity_triangle(1.5);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconConfig cfg = config_from(verify_thm3_conditions(m, 2), 2);
    CHECK(reconstruct_general(e, cfg).graph == m.graph());
    CHECK(reconstruct_ctp(e, loose(2)).graph.edge_count() == 0);
  }
}

TEST_CASE("decay pruning") {
  SUBCASE("matches the general algorithm at high temperature") {
    Model m = ising_on_graph(cycle_graph(4), 0.3);
    DistTable dist = joint_distribution(m);
    Estimator e = Estimator::exact(dist);
    ReconConfig cfg = config_from(verify_thm3_conditions(m, 2), 2);
    double kappa = 2.0;
    for (auto [u, v] : m.graph().edges()) kappa = std::min(kappa, correlation_distance(dist, u, v));
    cfg.kappa = kappa;
    ReconResult pruned = reconstruct_decay(e, cfg);
    CHECK(pruned.graph == reconstruct_general(e, cfg).graph);
    CHECK(pruned.graph == m.graph());
    CHECK(reconstruct(e, Algorithm::decay, cfg).algorithm == Algorithm::decay);
  }
  SUBCASE("threshold above every correlation") {
    Model m = ising_on_graph(cycle_graph(4), 0.3);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconConfig cfg = loose(2);
    cfg.kappa = 5.0;
    ReconResult r = reconstruct_decay(e, cfg);
    CHECK(r.graph.edge_count() == 0);
    CHECK_FALSE(r.warnings.empty());
  }
  SUBCASE("neighbourhood cap") {
    Model m = ising_on_graph(cycle_graph(5), 0.8);
    Estimator e = Estimator::exact(joint_distribution(m));
    ReconConfig cfg = loose(2);
    cfg.kappa = 1e-6;
    cfg.decay_cap = 2;
    CHECK_THROWS_AS(reconstruct_decay(e, cfg), CapExceeded);
  }
  SUBCASE("kappa is required") {
    Estimator e = Estimator::exact(joint_distribution(two_node(1.0)));
    CHECK_THROWS_AS(reconstruct_decay(e, loose(1)), InputError);
  }
}

TEST_CASE("correlation matrix and neighbourhoods") {
  Model m = ising_on_graph(path_graph(3), 0.5);
  DistTable dist = joint_distribution(m);
  auto corr = correlation_matrix(Estimator::exact(dist), 2);
  for (Vertex u = 0; u < 3; ++u) {
    CHECK(corr[u][u] == 0.0);
    for (Vertex v = 0; v < 3; ++v) {
      if (u != v) CHECK(corr[u][v] == correlation_distance(dist, u, v));
    }
  }
  CHECK(correlation_neighborhood(corr, 1, 2 * std::tanh(0.5) - 1e-9) == std::vector<Vertex>{0, 2});
  CHECK(correlation_neighborhood(corr, 0, 2 * std::tanh(0.5) - 1e-9) == std::vector<Vertex>{1});
}

TEST_CASE("symmetrization keeps claims from either side") {
  ReconResult r;
  r.per_vertex.resize(3);
  r.per_vertex[0].neighborhood = {1};
  r.per_vertex[1].neighborhood = {0, 2};
  r.per_vertex[2].neighborhood = {};
  symmetrize(r, 3);
  CHECK(r.graph.edge_count() == 2);
  CHECK(r.graph.has_edge(1, 2));
  REQUIRE(r.inconsistencies.size() == 1);
  CHECK(r.inconsistencies[0] == Edge{2, 1});
  CHECK_FALSE(r.success());
}

TEST_CASE("result serialization") {
  Model m = ising_on_graph(path_graph(3), 0.8);
  Estimator e = Estimator::exact(joint_distribution(m));
  ReconResult r = reconstruct_general(e, config_from(verify_thm3_conditions(m, 2), 2));
  auto j = result_to_json(r);
  CHECK(j["algorithm"] == "general");
  CHECK(j["n"] == 3);
  CHECK(j["edges"] == nlohmann::json::array({{0, 1}, {1, 2}}));
  CHECK(j["per_vertex"]["1"]["neighborhood"] == nlohmann::json::array({0, 2}));
  CHECK(j["success"] == true);
  CHECK(j.contains("config"));
  CHECK(edges_to_csv(r.graph) == "u,v\n0,1\n1,2\n");
}

TEST_CASE("edge scores") {
  EdgeScore same = score_edges(cycle_graph(4), cycle_graph(4));
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  EdgeScore part = score_edges(cycle_graph(4), path_graph(4));
  CHECK(part.precision == 1.0);
  CHECK(part.recall == 0.75);
  EdgeScore none = score_edges(Graph(4), path_graph(4));
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 1.0);
}

TEST_CASE("maximal cliques") {
  const Edge edges[] = {{0, 1}, {0, 2}, {1, 2}, {2, 3}};
  auto cliques = maximal_cliques(Graph(4, edges));
  CHECK(cliques == std::vector<std::vector<Vertex>>{{0, 1, 2}, {2, 3}});
}

TEST_CASE("hidden recovery leaves triangle-free graphs alone") {
  HiddenRecovery h = recover_hidden(cycle_graph(6), 3);
  CHECK(h.graph == cycle_graph(6));
  CHECK(h.cliques.empty());
  CHECK_THROWS_AS(recover_hidden(cycle_graph(6), 2), InputError);
}

TEST_CASE("hidden recovery restores the cube") {
  Graph gstar = hidden_view(hypercube_graph(3), 0);
  CHECK(gstar.n() == 7);
  HiddenRecovery h = recover_hidden(gstar, 3);
  REQUIRE(h.cliques.size() == 1);
  // Cube neighbours 1, 2, 4 of the hidden vertex become 0, 1, 3.
  CHECK(h.cliques[0] == std::vector<Vertex>{0, 1, 3});
  CHECK(h.graph.n() == 8);
  CHECK(h.graph.neighbors(7) == std::vector<Vertex>{0, 1, 3});
  CHECK(isomorphic(h.graph, hypercube_graph(3)));
}

TEST_CASE("two hidden vertices are contracted independently") {
  Graph truth = disjoint_union(k33(), k33());
  std::vector<Edge> edges = disjoint_union(hidden_view(k33(), 0), hidden_view(k33(), 0)).edges();
  Graph gstar(10, edges);
  HiddenRecovery h = recover_hidden(gstar, 3);
  CHECK(h.cliques.size() == 2);
  CHECK(isomorphic(h.graph, truth));
}

TEST_CASE("hidden recovery rejects unexplainable triangles") {
  // K4 with dprime 3: no disjoint family leaves a triangle-free remainder
  // with admissible degrees.
  const Edge k4[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK_THROWS_AS(recover_hidden(Graph(4, k4), 3), HiddenRecoveryError);
}

TEST_CASE("reconstruction with a hidden cube vertex") {
  Model m = ising_on_graph(hypercube_graph(3), 0.9);
  DistTable full = joint_distribution(m);
  const Vertex keep[] = {1, 2, 3, 4, 5, 6, 7};
  DistTable view = marginalize(full, keep);
  Graph gstar = hidden_view(hypercube_graph(3), 0);
  ConditionReport cr = verify_neighbor_conditions(view, gstar, 6);
  REQUIRE(cr.holds);
  ReconConfig cfg = config_from(cr, 6);
  HiddenReconstruction h = reconstruct_with_hidden(Estimator::exact(view), 3, cfg);
  CHECK(h.observed.graph == gstar);
  CHECK(isomorphic(h.recovered.graph, hypercube_graph(3)));
  auto j = hidden_to_json(h);
  CHECK(j["hidden_cliques"].size() == 1);
  CHECK(j["n"] == 8);
}

TEST_CASE("reconstruction with hidden vertices on a triangle-free model") {
  Model m = ising_on_graph(cycle_graph(5), 0.8);
  Estimator e = Estimator::exact(joint_distribution(m));
  ReconConfig cfg = config_from(verify_thm3_conditions(m, 6), 6);
  HiddenReconstruction h = reconstruct_with_hidden(e, 3, cfg);
  CHECK(h.recovered.graph == reconstruct_general(e, cfg).graph);
  CHECK(h.recovered.graph == m.graph());
}

TEST_CASE("sample-size formulas") {
  SampleRequirement t2 = required_samples_thm2(0.1, 0.1, 3, 100, 1.0);
  const double expected2 = std::ceil((81.0 * 5 / (0.01 * 1e-4 * 6) + 1) * 3 * std::log(100.0));
  CHECK(t2.samples == expected2);
  CHECK(t2.samples == doctest::Approx(9.326e8).epsilon(1e-3));
  CHECK(t2.failure_bound == doctest::Approx(2 * std::pow(2.0, 5) / 100));

  SampleRequirement t3 = required_samples_thm3(0.1, 0.1, 1, 100, 1.0);
  CHECK(t3.samples == doctest::Approx(5.595e8).epsilon(1e-3));
  CHECK(t3.samples == required_samples_thm2(0.1, 0.1, 1, 100, 1.0).samples);
  CHECK(required_samples_thm3(0.1, 0.1, 3, 100, 1.0).samples > t2.samples);
  CHECK_THROWS_AS(required_samples_thm2(0.1, 0.1, 0, 100, 1.0), InputError);

  const double c = calibrate_constant(5000.0, 2, 4, 1.0);
  CHECK(calibrated_samples(c, 2, 4, 1.0) == doctest::Approx(5000.0).epsilon(1e-3));
  CHECK(calibrate_constant(1.0, 2, 4, 1.0) == 0.0);
}

TEST_CASE("graph counting bound") {
  CountBound b = graph_count_lower_bound(8, 2);
  CHECK(b.valid);
  CHECK(b.log_count == doctest::Approx(2 * std::log(3.0)).epsilon(1e-12));
  CountBound gated = graph_count_lower_bound(4, 1);
  CHECK_FALSE(gated.valid);
  CHECK(gated.log_count == 0.0);
  CHECK(oracle::count_bounded_graphs(4, 1) == 10);
  for (int n = 1; n <= 6; ++n) {
    for (int d = 1; d <= 2; ++d) {
      CHECK(static_cast<double>(oracle::count_bounded_graphs(n, d)) >= std::exp(graph_count_lower_bound(n, d).log_count));
    }
  }
  CHECK(graph_count_lower_bound(9, 2).log_count == b.log_count);
}

TEST_CASE("error lower bound") {
  CHECK(error_lower_bound(8, 2, 2, 0) == doctest::Approx(1 - 1.0 / 9).epsilon(1e-12));
  CHECK(error_lower_bound(8, 2, 2, 1e6) == 0.0);
  auto j = bounds_to_json(100, 3, 2, 0.1, 0.1, 1.0);
  CHECK(j["required_samples_thm2"] == required_samples_thm2(0.1, 0.1, 3, 100, 1.0).samples);
  CHECK(j["graph_count_bound_valid"] == true);
}

TEST_CASE("Markov leakage vanishes without noise and appears with it") {
  Model m = ising_on_graph(cycle_graph(4), 1.0);
  DistTable clean = joint_distribution(m);
  ReconConfig cfg = config_from(verify_thm3_conditions(m, 2), 2);
  CHECK(markov_leakage(Estimator::exact(clean), m.graph(), Algorithm::general, cfg) < 1e-12);
  CHECK(markov_leakage(Estimator::exact(clean), m.graph(), Algorithm::ctp, cfg) < 1e-12);

  DistTable noisy = noisy_distribution(clean, NoiseChannel{0.02, {}});
  const double leak = markov_leakage(Estimator::exact(noisy), m.graph(), Algorithm::general, cfg);
  CHECK(leak > 0.2);
  // Threshold midway between leakage and signal recovers the graph exactly.
  ConditionReport nr = verify_neighbor_conditions(noisy, m.graph(), 2);
  ReconConfig mid = cfg;
  mid.epsilon = nr.epsilon_star + markov_leakage(Estimator::exact(noisy), m.graph(), Algorithm::general,
                                                 config_from(nr, 2));
  mid.delta = nr.delta_star;
  CHECK(reconstruct_general(Estimator::exact(noisy), mid).graph == m.graph());
  CHECK_FALSE(reconstruct_general(Estimator::exact(noisy), cfg).graph == m.graph());
}
