#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mrf/oracle.hpp"

namespace mrf {

/// Which non-degeneracy condition a report describes.
enum class ConditionKind {
  two_point,  // candidate sets U with N(v) not inside U, witness vertex w outside U
  neighbor,   // perturb one true neighbour u_i, condition also on W
  hidden,     // hidden-vertex condition: target v1, perturb v2 through a common neighbour
};

std::string to_string(ConditionKind kind);

/// A concrete pair of conditioning assignments realising a gap. The
/// conditioning set is U + W + {w}; the two assignments agree on U and W and
/// give w the values x_w and x_w_alt.
struct Witness {
  Vertex v = -1;  // target vertex
  std::vector<Vertex> U;
  std::vector<Vertex> W;
  Vertex w = -1;  // perturbed vertex
  Symbol x_v = 0;
  Assignment x_U;
  Assignment x_W;
  Symbol x_w = 0;
  Symbol x_w_alt = 0;
  double gap = 0.0;
  double mass = 0.0;
};

/// One quantified instance of a condition (a (v, U) pair for the two-point
/// condition, a (v, u_i, W) triple for the others). `w` is -1 when the
/// perturbed vertex is existentially quantified.
struct ConditionKey {
  Vertex v = -1;
  std::vector<Vertex> U;
  std::vector<Vertex> W;
  Vertex w = -1;
};

/// An (epsilon, delta) pair under which the condition holds model-wide.
struct OperatingPoint {
  double epsilon = 0.0;
  double delta = 0.0;
};

struct ConditionReport {
  ConditionKind kind = ConditionKind::two_point;
  int d = 0;
  bool holds = false;
  /// Largest achievable epsilon (the gap supported for every key).
  double epsilon_star = 0.0;
  /// Largest delta jointly achievable with epsilon_star.
  double delta_star = 0.0;
  /// One witness per satisfied key, realising (>= epsilon_star, >= delta_star).
  std::vector<Witness> witnesses;
  std::vector<ConditionKey> failures;
  /// Pareto front of jointly achievable (epsilon, delta), epsilon descending.
  std::vector<OperatingPoint> frontier;
};

/// Gaps at or below this are treated as exact zeros (round-off of equal conditionals).
constexpr double kGapTolerance = 1e-12;

// Each verifier enumerates every key of its condition and searches all
// witnesses against the exact distribution. `graph` must be the graph the
// distribution is Markov with respect to.

ConditionReport verify_two_point_conditions(const DistTable& dist, const Graph& graph, int d);
ConditionReport verify_thm2_conditions(const Model& model, int d);

ConditionReport verify_neighbor_conditions(const DistTable& dist, const Graph& graph, int d);
ConditionReport verify_thm3_conditions(const Model& model, int d);

/// Hidden-vertex condition; W ranges over subsets of size <= 2d.
ConditionReport verify_hidden_conditions(const DistTable& dist, const Graph& graph, int d);
ConditionReport verify_hidden_conditions(const Model& model, int d);

nlohmann::json report_to_json(const ConditionReport& report);

enum class EpsilonBoundForm {
  proof,   // tanh(2c) / (2 e^{2C} + 2 e^{-2C})
  stated,  // tanh(2c) / (2 C^2 + 2 C^{-2})
};

struct ConditionBounds {
  double epsilon_lb = 0.0;
  double delta_lb = 0.0;
};

/// Closed-form lower bounds on (epsilon, delta) for Ising models with
/// 0 < c < |beta| < C and max degree d. Throws InputError unless 0 < c < C.
ConditionBounds ising_condition_bounds(double c, double C, int d,
                                       EpsilonBoundForm form = EpsilonBoundForm::proof);

/// Bounds for the hidden-vertex condition on ferromagnetic Ising models.
/// Requires 0 < c < C and d >= 3.
ConditionBounds hidden_condition_bounds(double c, double C, int d);

/// Pairwise models only: every potential has sup-norm <= K and a four-point
/// interaction max |Psi(a,b) - Psi(c,b) - Psi(a,e) + Psi(c,e)| > gamma.
/// Throws InputError if any potential is not on exactly two vertices.
bool soft_constraint_feasible(const Model& model, double K, double gamma);

}  // namespace mrf
