#include "mrf/marginal_table.hpp"

#include <algorithm>
#include <cmath>

#include "mrf/errors.hpp"

namespace mrf {

std::size_t MarginalTable::position(Vertex v) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  if (it == vars.end() || *it != v) {
    throw InputError("marginal table: vertex " + std::to_string(v) + " not in table");
  }
  return static_cast<std::size_t>(it - vars.begin());
}

std::size_t MarginalTable::stride(std::size_t pos) const {
  std::size_t s = 1;
  for (std::size_t j = pos + 1; j < vars.size(); ++j) s *= static_cast<std::size_t>(alphabet);
  return s;
}

double MarginalTable::at(std::span<const Symbol> values) const {
  return probs[mixed_radix_index(values, alphabet)];
}

MarginalTable MarginalTable::sum_out(std::size_t pos) const {
  MarginalTable out;
  out.alphabet = alphabet;
  out.vars = vars;
  out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(pos));
  out.probs.assign(probs.size() / alphabet, 0.0);
  const std::size_t s = stride(pos);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    // Drop the digit at `pos`: high part stays, low part stays.
    std::size_t high = i / (s * alphabet);
    std::size_t low = i % s;
    out.probs[high * s + low] += probs[i];
  }
  return out;
}

std::vector<Vertex> sorted_vertex_set(std::span<const Vertex> vars) {
  std::vector<Vertex> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw InputError("vertex list contains duplicates");
  }
  return out;
}

double max_gated_gap(const MarginalTable& t, std::size_t target_pos, std::size_t pert_pos,
                     double gate) {
  double best = 0.0;
  for_each_perturbation(t, target_pos, pert_pos, [&](const PerturbationPair& p) {
    if (p.mass > gate && p.gap > best) best = p.gap;
  });
  return best;
}

double correlation_from_pair(const MarginalTable& pair) {
  if (pair.vars.size() != 2) throw InputError("correlation: expected a two-variable table");
  const int A = pair.alphabet;
  std::vector<double> pu(A, 0.0), pv(A, 0.0);
  for (int x = 0; x < A; ++x) {
    for (int y = 0; y < A; ++y) {
      pu[x] += pair.probs[x * A + y];
      pv[y] += pair.probs[x * A + y];
    }
  }
  double total = 0.0;
  for (int x = 0; x < A; ++x) {
    for (int y = 0; y < A; ++y) total += std::abs(pair.probs[x * A + y] - pu[x] * pv[y]);
  }
  return total;
}

}  // namespace mrf
