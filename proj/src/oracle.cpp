#include "mrf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "mrf/errors.hpp"

namespace mrf {

std::size_t enum_cap() {
  if (const char* env = std::getenv("MRF_ENUM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEnumCap;
}

std::size_t state_count(int n, int alphabet) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(alphabet)) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= static_cast<std::size_t>(alphabet);
  }
  return total;
}

DistTable joint_distribution(const Model& model, std::size_t cap) {
  const int n = model.n();
  const int A = model.alphabet();
  const std::size_t states = state_count(n, A);
  if (states > cap) {
    throw CapExceeded("oracle: " + std::to_string(A) + "^" + std::to_string(n) +
                      " states exceed the enumeration cap of " + std::to_string(cap) +
                      " (set MRF_ENUM_CAP to raise it)");
  }
  DistTable dist{n, A, std::vector<double>(states)};
  Assignment state(n, 0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < states; ++s) {
    if (s > 0) {
      int j = n - 1;
      while (state[j] == A - 1) state[j--] = 0;
      ++state[j];
    }
    double lw = model.log_weight(state);
    dist.probs[s] = lw;
    max_log = std::max(max_log, lw);
  }
  if (!std::isfinite(max_log)) throw InputError("oracle: no configuration has positive weight");
  double z = 0.0;
  for (double& p : dist.probs) {
    p = std::exp(p - max_log);  // exp(-inf) == 0
    z += p;
  }
  for (double& p : dist.probs) p /= z;
  return dist;
}

MarginalTable marginal_table(const DistTable& dist, std::span<const Vertex> vars) {
  MarginalTable t;
  t.alphabet = dist.alphabet;
  t.vars = sorted_vertex_set(vars);
  for (Vertex v : t.vars) {
    if (v < 0 || v >= dist.n) throw InputError("oracle: vertex " + std::to_string(v) + " out of range");
  }
  std::size_t size = 1;
  for (std::size_t i = 0; i < t.vars.size(); ++i) size *= static_cast<std::size_t>(dist.alphabet);
  t.probs.assign(size, 0.0);

  // Odometer over all states, keeping the table index in step.
  const int n = dist.n;
  const int A = dist.alphabet;
  std::vector<std::size_t> sub_stride(n, 0);
  for (std::size_t pos = 0; pos < t.vars.size(); ++pos) sub_stride[t.vars[pos]] = t.stride(pos);
  std::vector<int> digits(n, 0);
  std::size_t sub = 0;
  for (std::size_t s = 0; s < dist.probs.size(); ++s) {
    if (s > 0) {
      int j = n - 1;
      while (digits[j] == A - 1) {
        digits[j] = 0;
        sub -= static_cast<std::size_t>(A - 1) * sub_stride[j];
        --j;
      }
      ++digits[j];
      sub += sub_stride[j];
    }
    t.probs[sub] += dist.probs[s];
  }
  return t;
}

DistTable marginalize(const DistTable& dist, std::span<const Vertex> keep) {
  MarginalTable t = marginal_table(dist, keep);
  return DistTable{static_cast<int>(t.vars.size()), dist.alphabet, std::move(t.probs)};
}

namespace {

void check_assignment(const DistTable& dist, std::span<const Vertex> U, std::span<const Symbol> x_U) {
  if (U.size() != x_U.size()) throw InputError("oracle: assignment length does not match vertex list");
  for (Symbol x : x_U) {
    if (x < 0 || x >= dist.alphabet) throw InputError("oracle: symbol out of range");
  }
}

double lookup(const MarginalTable& t, std::span<const Vertex> U, std::span<const Symbol> x_U) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < U.size(); ++i) index += x_U[i] * t.stride(t.position(U[i]));
  return t.probs[index];
}

}  // namespace

double marginal(const DistTable& dist, std::span<const Vertex> U, std::span<const Symbol> x_U) {
  check_assignment(dist, U, x_U);
  if (U.empty()) return 1.0;
  return lookup(marginal_table(dist, U), U, x_U);
}

double conditional(const DistTable& dist, Vertex v, Symbol x_v, std::span<const Vertex> U,
                   std::span<const Symbol> x_U) {
  check_assignment(dist, U, x_U);
  if (std::find(U.begin(), U.end(), v) != U.end()) {
    throw InputError("oracle: conditioned vertex appears in the conditioning set");
  }
  std::vector<Vertex> joint_vars(U.begin(), U.end());
  joint_vars.push_back(v);
  std::vector<Symbol> joint_x(x_U.begin(), x_U.end());
  joint_x.push_back(x_v);
  const double den = marginal(dist, U, x_U);
  if (!(den > 0.0)) throw ZeroProbability("oracle: conditioning event has probability zero");
  return marginal(dist, joint_vars, joint_x) / den;
}

double correlation_distance(const DistTable& dist, Vertex u, Vertex v) {
  if (u == v) throw InputError("correlation_distance: u == v");
  const Vertex pair[] = {u, v};
  return correlation_from_pair(marginal_table(dist, pair));
}

}  // namespace mrf
