#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "mrf/marginal_table.hpp"
#include "mrf/oracle.hpp"
#include "mrf/sampler.hpp"

namespace mrf {

/// Probability interface for the reconstruction algorithms: empirical
/// frequencies from samples, or the exact enumerated distribution.
/// Read-only after construction; queries are safe from several threads.
class Estimator {
 public:
  static Estimator empirical(const SampleMatrix& samples);
  static Estimator exact(DistTable dist);

  Estimator(Estimator&&) noexcept;
  Estimator& operator=(Estimator&&) noexcept;
  ~Estimator();

  bool is_exact() const;
  int n() const;
  int alphabet() const;
  /// Sample count; 0 for the exact source.
  int k() const;

  /// Joint table of `vars` (any order, result sorted). Memoized per vertex set.
  std::shared_ptr<const MarginalTable> table(std::span<const Vertex> vars) const;

  /// P(X(U) = x_U); 1 for empty U.
  double prob(std::span<const Vertex> U, std::span<const Symbol> x_U) const;

  /// P(X(v) = x_v | X(U) = x_U). Throws ZeroProbability on a zero denominator.
  double cond_prob(Vertex v, Symbol x_v, std::span<const Vertex> U,
                   std::span<const Symbol> x_U) const;

  /// Correlation distance sum |P(x,y) - P(x)P(y)| under this source.
  double corr(Vertex u, Vertex v) const;

 private:
  struct State;
  explicit Estimator(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

}  // namespace mrf
