#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "mrf/graph.hpp"

namespace mrf {

/// Calls fn(subset) for every size-k subset of `pool` in lexicographic order
/// of positions. Stops early and returns false when fn returns false.
template <class Fn>
bool for_each_combination(std::span<const Vertex> pool, int k, Fn&& fn) {
  const int m = static_cast<int>(pool.size());
  if (k < 0 || k > m) return true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<Vertex> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    if (!fn(static_cast<const std::vector<Vertex>&>(subset))) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// All subsets of size 0..max_size, increasing size then lexicographic.
template <class Fn>
bool for_each_subset_up_to(std::span<const Vertex> pool, int max_size, Fn&& fn) {
  for (int k = 0; k <= max_size && k <= static_cast<int>(pool.size()); ++k) {
    if (!for_each_combination(pool, k, fn)) return false;
  }
  return true;
}

/// Sorted pool {0..n-1} minus `excluded`.
inline std::vector<Vertex> vertices_except(int n, std::span<const Vertex> excluded) {
  std::vector<bool> drop(n, false);
  for (Vertex v : excluded) {
    if (v >= 0 && v < n) drop[v] = true;
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    if (!drop[v]) out.push_back(v);
  }
  return out;
}

inline std::vector<Vertex> set_union(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::vector<Vertex> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mrf
