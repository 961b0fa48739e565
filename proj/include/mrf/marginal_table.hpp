#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mrf/graph.hpp"
#include "mrf/model.hpp"

namespace mrf {

/// Joint probabilities of a vertex subset. `vars` is sorted ascending and
/// entries use mixed-radix order with vars[0] most significant.
struct MarginalTable {
  std::vector<Vertex> vars;
  int alphabet = 2;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  /// Position of v in vars; throws InputError when absent.
  std::size_t position(Vertex v) const;
  std::size_t stride(std::size_t pos) const;
  /// Digit of variable at `pos` inside table index `index`.
  Symbol digit(std::size_t index, std::size_t pos) const {
    return static_cast<Symbol>((index / stride(pos)) % alphabet);
  }
  /// Probability of an assignment to `vars` (in vars order).
  double at(std::span<const Symbol> values) const;
  /// Marginal obtained by summing out the variable at `pos`.
  MarginalTable sum_out(std::size_t pos) const;
};

/// Returns the sorted copy of `vars`; throws InputError on duplicates.
std::vector<Vertex> sorted_vertex_set(std::span<const Vertex> vars);

/// One comparison of conditionals of the target variable under two
/// conditioning assignments that differ only in the perturbed variable.
struct PerturbationPair {
  std::size_t base;   // table index with target and perturbed digits both 0
  Symbol x_target;
  Symbol x_pert;      // perturbed variable's value in the first assignment
  Symbol x_pert_alt;  // ... and in the second; x_pert < x_pert_alt
  double gap;         // |P(target | first) - P(target | second)|
  double mass;        // min of the two conditioning masses
};

/// Visits every pair of conditioning assignments that differ in the perturbed
/// variable and both have positive mass, once per target symbol. Conditioning
/// masses are sums over the target digit.
template <class Fn>
void for_each_perturbation(const MarginalTable& t, std::size_t target_pos,
                           std::size_t pert_pos, Fn&& fn) {
  const int A = t.alphabet;
  const std::size_t st = t.stride(target_pos);
  const std::size_t sp = t.stride(pert_pos);
  std::vector<double> mass(A);
  for (std::size_t base = 0; base < t.size(); ++base) {
    if ((base / st) % A != 0 || (base / sp) % A != 0) continue;
    for (int xp = 0; xp < A; ++xp) {
      double m = 0.0;
      for (int xv = 0; xv < A; ++xv) m += t.probs[base + xp * sp + xv * st];
      mass[xp] = m;
    }
    for (int xp = 0; xp < A; ++xp) {
      if (!(mass[xp] > 0.0)) continue;
      for (int xq = xp + 1; xq < A; ++xq) {
        if (!(mass[xq] > 0.0)) continue;
        const double m = mass[xp] < mass[xq] ? mass[xp] : mass[xq];
        for (int xv = 0; xv < A; ++xv) {
          const double a = t.probs[base + xp * sp + xv * st] / mass[xp];
          const double b = t.probs[base + xq * sp + xv * st] / mass[xq];
          const double gap = a > b ? a - b : b - a;
          fn(PerturbationPair{base, xv, xp, xq, gap, m});
        }
      }
    }
  }
}

/// Largest gap over pairs whose two conditioning masses both exceed `gate`
/// (strictly); 0 when no pair passes the gate.
double max_gated_gap(const MarginalTable& t, std::size_t target_pos, std::size_t pert_pos,
                     double gate);

/// sum_{x,y} |P(x,y) - P(x)P(y)| for a two-variable table.
double correlation_from_pair(const MarginalTable& pair);

}  // namespace mrf
