#include "mrf/hidden.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "mrf/errors.hpp"
#include "mrf/subsets.hpp"

namespace mrf {

namespace {

void bron_kerbosch(const Graph& g, std::vector<Vertex>& r, std::vector<Vertex> p, std::vector<Vertex> x,
                   std::vector<std::vector<Vertex>>& out) {
  if (p.empty() && x.empty()) {
    std::vector<Vertex> c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  // Pivot: vertex of P + X with most neighbours in P.
  Vertex pivot = -1;
  std::size_t best = 0;
  for (const auto* set : {&p, &x}) {
    for (Vertex u : *set) {
      std::size_t hits = 0;
      for (Vertex w : p) hits += g.has_edge(u, w);
      if (pivot < 0 || hits > best) {
        pivot = u;
        best = hits;
      }
    }
  }
  const std::vector<Vertex> candidates = [&] {
    std::vector<Vertex> c;
    for (Vertex u : p) {
      if (!g.has_edge(pivot, u)) c.push_back(u);
    }
    return c;
  }();
  for (Vertex u : candidates) {
    std::vector<Vertex> p2, x2;
    for (Vertex w : p) {
      if (g.has_edge(u, w)) p2.push_back(w);
    }
    for (Vertex w : x) {
      if (g.has_edge(u, w)) x2.push_back(w);
    }
    r.push_back(u);
    bron_kerbosch(g, r, std::move(p2), std::move(x2), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), u));
    x.push_back(u);
  }
}

struct FamilySearch {
  const Graph& g;
  int dprime;
  std::vector<std::vector<Vertex>> cliques;  // all cliques of size 3..dprime
  std::vector<std::vector<bool>> removed;    // edges deleted by the chosen cliques
  std::vector<bool> used;
  std::vector<std::size_t> chosen;
  std::set<std::vector<std::size_t>> families;

  bool present(Vertex a, Vertex b) const { return g.has_edge(a, b) && !removed[a][b]; }

  bool first_triangle(std::array<Vertex, 3>& tri) const {
    for (const auto& [a, b] : g.edges()) {
      if (!present(a, b)) continue;
      for (Vertex c : g.neighbors(b)) {
        if (c > b && present(b, c) && present(a, c)) {
          tri = {a, b, c};
          return true;
        }
      }
    }
    return false;
  }

  bool degrees_ok() const {
    for (std::size_t idx : chosen) {
      const auto& c = cliques[idx];
      for (Vertex u : c) {
        const int deg = g.degree(u) - static_cast<int>(c.size() - 1) + 1;
        if (deg < 3 || deg > dprime) return false;
      }
    }
    return true;
  }

  void set_clique(const std::vector<Vertex>& c, bool on) {
    for (Vertex a : c) {
      used[a] = on;
      for (Vertex b : c) {
        if (a != b) removed[a][b] = on;
      }
    }
  }

  void search() {
    if (families.size() > 1) return;
    std::array<Vertex, 3> tri{};
    if (!first_triangle(tri)) {
      if (degrees_ok()) {
        auto f = chosen;
        std::sort(f.begin(), f.end());
        families.insert(std::move(f));
      }
      return;
    }
    for (std::size_t idx = 0; idx < cliques.size(); ++idx) {
      const auto& c = cliques[idx];
      int covered = 0;
      bool free = true;
      for (Vertex u : c) {
        if (used[u]) free = false;
        covered += (u == tri[0] || u == tri[1] || u == tri[2]);
      }
      if (!free || covered < 2) continue;
      set_clique(c, true);
      chosen.push_back(idx);
      search();
      chosen.pop_back();
      set_clique(c, false);
      if (families.size() > 1) return;
    }
  }
};

std::string clique_text(const std::vector<Vertex>& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "}";
}

}  // namespace

std::vector<std::vector<Vertex>> maximal_cliques(const Graph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> r;
  std::vector<Vertex> p(g.n());
  for (Vertex v = 0; v < g.n(); ++v) p[v] = v;
  bron_kerbosch(g, r, std::move(p), {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

HiddenRecovery recover_hidden(const Graph& gstar, int dprime) {
  if (dprime < 3) throw InputError("recover_hidden: dprime must be >= 3");
  const int n = gstar.n();
  FamilySearch fs{gstar, dprime, {}, std::vector<std::vector<bool>>(n, std::vector<bool>(n, false)),
                  std::vector<bool>(n, false), {}, {}};
  std::set<std::vector<Vertex>> all;
  for (const auto& m : maximal_cliques(gstar)) {
    const int top = std::min<int>(static_cast<int>(m.size()), dprime);
    for (int size = 3; size <= top; ++size) {
      for_each_combination(m, size, [&](const std::vector<Vertex>& c) {
        all.insert(c);
        return true;
      });
    }
  }
  fs.cliques.assign(all.begin(), all.end());
  fs.search();

  if (fs.families.empty()) {
    throw HiddenRecoveryError(
        "recover_hidden: no family of disjoint cliques explains the triangles of the reconstructed graph");
  }
  if (fs.families.size() > 1) {
    std::string text;
    for (const auto& family : fs.families) {
      text += text.empty() ? "" : " vs ";
      for (std::size_t idx : family) text += clique_text(fs.cliques[idx]);
    }
    throw HiddenRecoveryError("recover_hidden: ambiguous hidden-vertex placement: " + text);
  }

  HiddenRecovery out;
  for (std::size_t idx : *fs.families.begin()) out.cliques.push_back(fs.cliques[idx]);
  std::sort(out.cliques.begin(), out.cliques.end());
  const int total = n + static_cast<int>(out.cliques.size());
  std::vector<std::vector<bool>> drop(n, std::vector<bool>(n, false));
  for (const auto& c : out.cliques) {
    for (Vertex a : c) {
      for (Vertex b : c) drop[a][b] = a != b;
    }
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : gstar.edges()) {
    if (!drop[a][b]) edges.push_back({a, b});
  }
  for (std::size_t i = 0; i < out.cliques.size(); ++i) {
    for (Vertex u : out.cliques[i]) edges.push_back({u, n + static_cast<Vertex>(i)});
  }
  out.graph = Graph(total, edges);
  return out;
}

HiddenReconstruction reconstruct_with_hidden(const Estimator& est, int dprime, ReconConfig cfg) {
  if (dprime < 3) throw InputError("reconstruct_with_hidden: dprime must be >= 3");
  cfg.d = 2 * dprime;
  HiddenReconstruction h;
  h.observed = reconstruct_general(est, cfg);
  h.recovered = recover_hidden(h.observed.graph, dprime);
  return h;
}

nlohmann::json hidden_to_json(const HiddenReconstruction& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : h.recovered.graph.edges()) edges.push_back({u, v});
  return {{"observed", result_to_json(h.observed)},
          {"n", h.recovered.graph.n()},
          {"edges", std::move(edges)},
          {"hidden_cliques", h.recovered.cliques}};
}

}  // namespace mrf
