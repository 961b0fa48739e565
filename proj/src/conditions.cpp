#include "mrf/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mrf/errors.hpp"
#include "mrf/subsets.hpp"

namespace mrf {

using nlohmann::json;

std::string to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::two_point: return "two_point";
    case ConditionKind::neighbor: return "neighbor";
    case ConditionKind::hidden: return "hidden";
  }
  return "unknown";
}

namespace {

/// One table scan contributing candidates to a key: target and perturbed
/// vertex inside the table over target + conditioning set.
struct Probe {
  Vertex target;
  Vertex pert;
  std::vector<Vertex> conditioning;  // sorted, contains pert, excludes target
};

struct FrontEntry {
  double gap;
  double mass;
  std::size_t probe;
  PerturbationPair pair;
};

struct KeyState {
  ConditionKey key;
  std::vector<Probe> probes;
  std::vector<FrontEntry> front;  // Pareto-optimal (gap, mass) pairs
};

void offer(std::vector<FrontEntry>& front, const FrontEntry& e) {
  for (const auto& f : front) {
    if (f.gap >= e.gap && f.mass >= e.mass) return;
  }
  std::erase_if(front, [&](const FrontEntry& f) { return e.gap >= f.gap && e.mass >= f.mass; });
  front.push_back(e);
}

class TableCache {
 public:
  explicit TableCache(const DistTable& dist) : dist_(dist) {}

  const MarginalTable& get(const std::vector<Vertex>& sorted_vars) {
    auto it = cache_.find(sorted_vars);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(sorted_vars, marginal_table(dist_, sorted_vars)).first->second;
  }

 private:
  const DistTable& dist_;
  std::map<std::vector<Vertex>, MarginalTable> cache_;
};

Witness make_witness(const KeyState& ks, const FrontEntry& e, const TableCache&,
                     const MarginalTable& t) {
  const Probe& probe = ks.probes[e.probe];
  Witness w;
  w.v = probe.target;
  w.w = probe.pert;
  w.W = ks.key.W;
  for (Vertex u : probe.conditioning) {
    if (u != probe.pert && !std::binary_search(w.W.begin(), w.W.end(), u)) w.U.push_back(u);
  }
  w.x_v = e.pair.x_target;
  w.x_w = e.pair.x_pert;
  w.x_w_alt = e.pair.x_pert_alt;
  for (Vertex u : w.U) w.x_U.push_back(t.digit(e.pair.base, t.position(u)));
  for (Vertex u : w.W) w.x_W.push_back(t.digit(e.pair.base, t.position(u)));
  w.gap = e.gap;
  w.mass = e.mass;
  return w;
}

ConditionReport run_verification(const DistTable& dist, ConditionKind kind, int d,
                                 std::vector<KeyState> keys) {
  TableCache cache(dist);
  for (auto& ks : keys) {
    for (std::size_t p = 0; p < ks.probes.size(); ++p) {
      const Probe& probe = ks.probes[p];
      std::vector<Vertex> vars = probe.conditioning;
      vars.push_back(probe.target);
      std::sort(vars.begin(), vars.end());
      const MarginalTable& t = cache.get(vars);
      for_each_perturbation(t, t.position(probe.target), t.position(probe.pert),
                            [&](const PerturbationPair& pair) {
                              if (pair.gap > kGapTolerance) {
                                offer(ks.front, FrontEntry{pair.gap, pair.mass, p, pair});
                              }
                            });
    }
  }

  ConditionReport report;
  report.kind = kind;
  report.d = d;
  for (const auto& ks : keys) {
    if (ks.front.empty()) report.failures.push_back(ks.key);
  }
  if (!report.failures.empty()) {
    report.holds = false;
    return report;
  }
  if (keys.empty()) {
    // Vacuous: no key constrains the model; conditional gaps and masses never exceed 1.
    report.holds = true;
    report.epsilon_star = 1.0;
    report.delta_star = 1.0;
    report.frontier.push_back({1.0, 1.0});
    return report;
  }

  // Best gap available to key ks using only entries of mass >= t.
  auto best_gap = [](const KeyState& ks, double t) {
    double g = 0.0;
    for (const auto& e : ks.front) {
      if (e.mass >= t) g = std::max(g, e.gap);
    }
    return g;
  };

  std::vector<double> thresholds;
  for (const auto& ks : keys) {
    for (const auto& e : ks.front) thresholds.push_back(e.mass);
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  double last_eps = 0.0;
  for (double t : thresholds) {
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& ks : keys) eps = std::min(eps, best_gap(ks, t));
    if (eps > last_eps) {
      report.frontier.push_back({eps, t});
      last_eps = eps;
    }
  }
  std::reverse(report.frontier.begin(), report.frontier.end());

  report.epsilon_star = report.frontier.front().epsilon;
  const double eps_floor = report.epsilon_star - kGapTolerance;
  report.delta_star = std::numeric_limits<double>::infinity();
  for (const auto& ks : keys) {
    const FrontEntry* chosen = nullptr;
    for (const auto& e : ks.front) {
      if (e.gap >= eps_floor && (!chosen || e.mass > chosen->mass)) chosen = &e;
    }
    report.delta_star = std::min(report.delta_star, chosen->mass);
    const Probe& probe = ks.probes[chosen->probe];
    std::vector<Vertex> vars = probe.conditioning;
    vars.push_back(probe.target);
    std::sort(vars.begin(), vars.end());
    report.witnesses.push_back(make_witness(ks, *chosen, cache, cache.get(vars)));
  }
  report.holds = report.epsilon_star > 0.0 && report.delta_star > 0.0;
  return report;
}

void check_degree(int d) {
  if (d < 0) throw InputError("verify: degree bound must be >= 0");
}

}  // namespace

ConditionReport verify_two_point_conditions(const DistTable& dist, const Graph& graph, int d) {
  check_degree(d);
  if (graph.n() != dist.n) throw InputError("verify: graph and distribution sizes differ");
  const int n = dist.n;
  std::vector<KeyState> keys;
  for (Vertex v = 0; v < n; ++v) {
    const auto& nv = graph.neighbors(v);
    const Vertex self[] = {v};
    std::vector<Vertex> pool = vertices_except(n, self);
    for_each_subset_up_to(pool, d, [&](const std::vector<Vertex>& U) {
      bool covers = std::includes(U.begin(), U.end(), nv.begin(), nv.end());
      if (covers) return true;
      KeyState ks;
      ks.key = ConditionKey{v, U, {}, -1};
      for (Vertex w : pool) {
        if (std::binary_search(U.begin(), U.end(), w)) continue;
        const Vertex single[] = {w};
        ks.probes.push_back(Probe{v, w, set_union(U, single)});
      }
      keys.push_back(std::move(ks));
      return true;
    });
  }
  return run_verification(dist, ConditionKind::two_point, d, std::move(keys));
}

ConditionReport verify_thm2_conditions(const Model& model, int d) {
  return verify_two_point_conditions(joint_distribution(model), model.graph(), d);
}

ConditionReport verify_neighbor_conditions(const DistTable& dist, const Graph& graph, int d) {
  check_degree(d);
  if (graph.n() != dist.n) throw InputError("verify: graph and distribution sizes differ");
  const int n = dist.n;
  std::vector<KeyState> keys;
  for (Vertex v = 0; v < n; ++v) {
    const auto& nv = graph.neighbors(v);
    if (nv.empty()) continue;
    std::vector<Vertex> excluded = nv;
    excluded.push_back(v);
    std::vector<Vertex> pool = vertices_except(n, excluded);
    for (Vertex ui : nv) {
      for_each_subset_up_to(pool, d, [&](const std::vector<Vertex>& W) {
        std::vector<Vertex> rest;
        for (Vertex u : nv) {
          if (u != ui) rest.push_back(u);
        }
        KeyState ks;
        ks.key = ConditionKey{v, rest, W, ui};
        ks.probes.push_back(Probe{v, ui, set_union(nv, W)});
        keys.push_back(std::move(ks));
        return true;
      });
    }
  }
  return run_verification(dist, ConditionKind::neighbor, d, std::move(keys));
}

ConditionReport verify_thm3_conditions(const Model& model, int d) {
  return verify_neighbor_conditions(joint_distribution(model), model.graph(), d);
}

ConditionReport verify_hidden_conditions(const DistTable& dist, const Graph& graph, int d) {
  check_degree(d);
  if (graph.n() != dist.n) throw InputError("verify: graph and distribution sizes differ");
  const int n = dist.n;
  std::vector<KeyState> keys;
  for (Vertex v = 0; v < n; ++v) {
    const auto& nv = graph.neighbors(v);
    for (Vertex v1 : nv) {
      for (Vertex v2 : nv) {
        if (v1 == v2) continue;
        std::vector<Vertex> around = set_union(nv, graph.neighbors(v1));
        std::vector<Vertex> U;
        for (Vertex u : around) {
          if (u != v && u != v1 && u != v2) U.push_back(u);
        }
        std::vector<Vertex> pool = vertices_except(n, around);
        for_each_subset_up_to(pool, 2 * d, [&](const std::vector<Vertex>& W) {
          const Vertex single[] = {v2};
          KeyState ks;
          ks.key = ConditionKey{v1, U, W, v2};
          ks.probes.push_back(Probe{v1, v2, set_union(set_union(U, W), single)});
          keys.push_back(std::move(ks));
          return true;
        });
      }
    }
  }
  return run_verification(dist, ConditionKind::hidden, d, std::move(keys));
}

ConditionReport verify_hidden_conditions(const Model& model, int d) {
  return verify_hidden_conditions(joint_distribution(model), model.graph(), d);
}

json report_to_json(const ConditionReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures) {
    json j = {{"v", f.v}, {"U", f.U}};
    if (!f.W.empty() || report.kind != ConditionKind::two_point) j["W"] = f.W;
    if (f.w >= 0) j["w"] = f.w;
    failures.push_back(std::move(j));
  }
  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"v", w.v},
                         {"U", w.U},
                         {"W", w.W},
                         {"w", w.w},
                         {"assignment",
                          {{"x_v", w.x_v}, {"x_U", w.x_U}, {"x_W", w.x_W}, {"x_w", w.x_w},
                           {"x_w_alt", w.x_w_alt}}},
                         {"gap", w.gap},
                         {"mass", w.mass}});
  }
  json frontier = json::array();
  for (const auto& p : report.frontier) frontier.push_back({{"epsilon", p.epsilon}, {"delta", p.delta}});
  return {{"condition", to_string(report.kind)},
          {"d", report.d},
          {"holds", report.holds},
          {"epsilon_star", report.epsilon_star},
          {"delta_star", report.delta_star},
          {"failures", std::move(failures)},
          {"witnesses", std::move(witnesses)},
          {"frontier", std::move(frontier)}};
}

ConditionBounds ising_condition_bounds(double c, double C, int d, EpsilonBoundForm form) {
  if (!(c > 0.0 && c < C)) throw InputError("ising_condition_bounds: need 0 < c < C");
  if (d < 0) throw InputError("ising_condition_bounds: d must be >= 0");
  const double num = std::tanh(2.0 * c);
  const double den = form == EpsilonBoundForm::proof
                         ? 2.0 * std::exp(2.0 * C) + 2.0 * std::exp(-2.0 * C)
                         : 2.0 * C * C + 2.0 / (C * C);
  return {num / den, std::exp(-4.0 * d * C) / std::pow(2.0, 2.0 * d)};
}

ConditionBounds hidden_condition_bounds(double c, double C, int d) {
  if (!(c > 0.0 && c < C)) throw InputError("hidden_condition_bounds: need 0 < c < C");
  if (d < 3) throw InputError("hidden_condition_bounds: d must be >= 3");
  const double eps =
      std::tanh(2.0 * c) / (32.0 * std::exp(2.0 * (d + 1) * C) * (C * C + 1.0 / (C * C)));
  return {eps, std::exp(-4.0 * d * C) / std::pow(2.0, 2.0 * d)};
}

bool soft_constraint_feasible(const Model& model, double K, double gamma) {
  const int A = model.alphabet();
  bool ok = true;
  for (const auto& p : model.potentials()) {
    if (p.clique.size() != 2) {
      throw InputError("soft_constraint_feasible: potential on " + std::to_string(p.clique.size()) +
                       " vertices; only pairwise potentials are supported");
    }
    double sup = 0.0;
    for (double x : p.table) sup = std::max(sup, std::abs(x));
    if (!(sup <= K)) ok = false;
    auto psi = [&](int a, int b) { return p.table[a * A + b]; };
    double best = 0.0;
    for (int x1 = 0; x1 < A; ++x1) {
      for (int x2 = 0; x2 < A; ++x2) {
        for (int x3 = 0; x3 < A; ++x3) {
          for (int x4 = 0; x4 < A; ++x4) {
            double v = std::abs(psi(x1, x2) - psi(x3, x2) - psi(x1, x4) + psi(x3, x4));
            if (std::isfinite(v)) best = std::max(best, v);
          }
        }
      }
    }
    if (!(best > gamma)) ok = false;
  }
  return ok;
}

}  // namespace mrf
