#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mrf/marginal_table.hpp"
#include "mrf/model.hpp"

namespace mrf {

/// Exact joint distribution over A^n, vertex 0 most significant.
struct DistTable {
  int n = 0;
  int alphabet = 2;
  std::vector<double> probs;
};

constexpr std::size_t kDefaultEnumCap = std::size_t{1} << 24;

/// Enumeration cap: MRF_ENUM_CAP if set to a positive integer, else 2^24.
std::size_t enum_cap();

/// Number of states A^n, saturating at SIZE_MAX.
std::size_t state_count(int n, int alphabet);

/// Exact enumeration of the Gibbs distribution. States hit by a -inf
/// potential get probability 0. Throws CapExceeded when A^n > cap and
/// InputError when no state has positive weight.
DistTable joint_distribution(const Model& model, std::size_t cap = enum_cap());

/// Joint table of `vars` (any order; the result is sorted).
MarginalTable marginal_table(const DistTable& dist, std::span<const Vertex> vars);

/// Distribution of the sorted vertex subset `keep`, relabelled 0..|keep|-1.
DistTable marginalize(const DistTable& dist, std::span<const Vertex> keep);

/// P(X(U) = x_U); 1 for the empty event.
double marginal(const DistTable& dist, std::span<const Vertex> U, std::span<const Symbol> x_U);

/// P(X(v) = x_v | X(U) = x_U). Throws ZeroProbability when P(X(U)=x_U) = 0.
double conditional(const DistTable& dist, Vertex v, Symbol x_v, std::span<const Vertex> U,
                   std::span<const Symbol> x_U);

/// sum_{x_u,x_v} |P(x_u,x_v) - P(x_u)P(x_v)|, in [0, 2].
double correlation_distance(const DistTable& dist, Vertex u, Vertex v);

}  // namespace mrf
